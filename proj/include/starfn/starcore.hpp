#pragma once

#include "starfn/slicing.hpp"

#include <vector>

namespace starfn {

constexpr double kLogFloor = -1e4;
constexpr double kLogCeiling = 1e4;
constexpr int kDefaultCircleSamples = 4096;
constexpr int kAcceptanceCircleSamples = 8192;

/// log|F(r e^{ix} zeta)| at the midpoint nodes x_i = -pi + (i + 1/2) 2 pi / M.
/// Values are clamped to [kLogFloor, kLogCeiling]; `clipped` counts the clamped
/// nodes (including exact hits on a zero or pole).
struct CircleSamples {
    double r = 0.0;
    std::vector<Complex> direction;
    std::vector<double> values;
    int clipped = 0;

    int size() const noexcept { return static_cast<int>(values.size()); }
};

CircleSamples circle_log_samples(const SlicePair& slice, double r, int samples);
CircleSamples circle_log_samples(const MeroFunction& f, const Direction& zeta, double r, int samples);

/// Sample values sorted into nonincreasing order, with prefix sums
/// (prefix[0] = 0, prefix[k] = sum of the k largest values).
class RearrangedProfile {
public:
    RearrangedProfile() = default;
    explicit RearrangedProfile(std::vector<double> values);

    int size() const noexcept { return static_cast<int>(sorted_.size()); }
    std::span<const double> sorted_values() const noexcept { return sorted_; }
    std::span<const double> prefix_sums() const noexcept { return prefix_; }
    double max_abs() const noexcept { return max_abs_; }

    /// Bathtub solution of sup over |E| = 2 theta of (1/2pi) int_E values:
    /// the k = floor(theta M / pi) largest samples plus the fractional part of
    /// the next one, divided by M. Piecewise linear and concave in theta.
    double star(double theta) const;

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;
    double max_abs_ = 0.0;
};

double star_rearranged(const RearrangedProfile& profile, double theta);
double star_rearranged(const CircleSamples& samples, double theta);

struct LevelThreshold {
    double t = 0.0;
    bool degenerate = false;  ///< all samples equal
};

/// The quantile t whose discrete superlevel set {values > t} has measure at
/// most 2 theta while {values >= t} has measure above it. theta in (0, pi).
LevelThreshold level_threshold(const RearrangedProfile& profile, double theta);
LevelThreshold level_threshold(const CircleSamples& samples, double theta);

/// (1/M) sum max(values_i - t, 0) + theta t / pi with t = level_threshold.
/// Sums over the samples in their original order.
double star_thresholded(const CircleSamples& samples, double theta);

struct StarValue {
    double r = 0.0;
    double theta = 0.0;
    double fstar = 0.0;
    double big_N_inf = 0.0;
    double total = 0.0;
};

/// Reusable evaluator for one slice: roots are computed once, while circle
/// profiles are built per radius.
class SliceEvaluator {
public:
    SliceEvaluator(const MeroFunction& f, const Direction& zeta, double tol = kIndeterminacyTol);

    const SlicePair& slice() const noexcept { return slice_; }
    const SliceDivisor& divisor() const noexcept { return divisor_; }
    bool indeterminate() const noexcept { return divisor_.indeterminate; }

    CircleSamples samples(double r, int count) const { return circle_log_samples(slice_, r, count); }
    RearrangedProfile profile(double r, int count) const;
    double n_inf(double r) const { return counting_big_N(divisor_, r, Target::pole); }

    StarValue star(double r, double theta, int count) const;

private:
    SlicePair slice_;
    SliceDivisor divisor_;
};

/// T*(r e^{i theta}, F_zeta) = rearranged star + N(r, inf; F_zeta).
StarValue slice_star_total(const MeroFunction& f, const Direction& zeta, double r, double theta,
                           int samples = kDefaultCircleSamples);

}  // namespace starfn
