#pragma once

#include "starfn/starcore.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace starfn {

/// i.i.d. directions, uniform on the unit sphere of C^n. Each direction is a
/// normalized 2n-dimensional standard Gaussian vector read as n complex
/// components; the sequence is a pure function of (n, count, seed).
struct DirectionSample {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::vector<Direction> directions;

    std::size_t count() const noexcept { return directions.size(); }
};

DirectionSample sample_directions(std::size_t n, std::size_t count, std::uint64_t seed);

/// Monte Carlo estimate of a sphere average. `std_error` is the sample
/// standard deviation over sqrt(count_used).
struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t count_used = 0;
    std::size_t skipped = 0;

    friend bool operator==(const Estimate&, const Estimate&) = default;
};

/// Pairwise-summed mean and standard error of `values`.
Estimate make_estimate(std::span<const double> values, std::size_t skipped = 0);

struct EvalOptions {
    int circle_samples = kDefaultCircleSamples;
    double indeterminacy_tol = kIndeterminacyTol;
    /// Worker threads for direction-wise evaluation; results do not depend on it.
    unsigned threads = 1;
};

/// Sphere average of T*(r e^{i theta}, F_zeta). Directions whose slice is
/// indeterminate are skipped and counted; DomainError if all are skipped.
Estimate star_several(const MeroFunction& f, double r, double theta, const DirectionSample& sample,
                      const EvalOptions& options = {});

/// Sphere average of N(r, a; F_zeta).
Estimate counting_several(const MeroFunction& f, double r, Target a, const DirectionSample& sample,
                          const EvalOptions& options = {});

/// Sphere average of n(t, a; F_zeta); for a = 0 the Lelong number of the zero set.
Estimate lelong_number(const MeroFunction& f, double t, Target a, const DirectionSample& sample,
                       const EvalOptions& options = {});

/// Uniform rectangular grid over r in [r_min, r_max] and theta in [theta_min, theta_max].
struct GridSpec {
    double r_min = 0.5;
    double r_max = 2.0;
    std::size_t nr = 10;
    double theta_min = 0.0;
    double theta_max = 3.141592653589793;
    std::size_t ntheta = 10;

    void validate() const;
    std::vector<double> radii() const;
    std::vector<double> thetas() const;
    /// Smallest distance in the plane between neighbouring grid points.
    double min_spacing() const;
};

struct StarGrid {
    std::vector<double> r_values;
    std::vector<double> theta_values;
    /// Row-major: cells[i * theta_values.size() + j] is at (r_values[i], theta_values[j]).
    std::vector<Estimate> cells;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::size_t count = 0;
    std::size_t skipped = 0;
    int circle_samples = 0;

    const Estimate& at(std::size_t i, std::size_t j) const { return cells[i * theta_values.size() + j]; }

    friend bool operator==(const StarGrid&, const StarGrid&) = default;
};

/// Cell-wise star_several over one shared direction sample.
StarGrid star_grid(const MeroFunction& f, const GridSpec& spec, const DirectionSample& sample,
                   const EvalOptions& options = {});

enum class GridFormat { csv, json };

/// CSV: header "r,theta,mean,stderr,count_used", one row per cell, 17
/// significant digits, '\n' line endings.
std::string grid_to_csv(const StarGrid& grid);
std::string grid_to_json(const StarGrid& grid);
StarGrid grid_from_json(std::string_view text);
void export_grid(const StarGrid& grid, const std::filesystem::path& path, GridFormat format);

/// Circle-mean minus centre value of T*(., F_zeta) at every interior grid
/// point, for one slice. The test circle of radius rho uses `nodes` equally
/// spaced points placed symmetrically about the ray through the centre.
/// Results are row-major over interior points (nr - 2) x (ntheta - 2).
std::vector<double> slice_mean_value_defects(const SliceEvaluator& slice, const GridSpec& spec, double rho,
                                             int nodes, int circle_samples);

/// Default test-circle radius: half the minimum grid spacing.
double default_test_radius(const GridSpec& spec);

constexpr double kMeanValueQuadratureTol = 1e-4;

struct MeanValuePoint {
    double r = 0.0;
    double theta = 0.0;
    double difference = 0.0;  ///< estimated circle mean minus centre value of T*(., F)
    double std_error = 0.0;   ///< of the paired per-direction differences
    bool violation = false;
};

struct SubharmonicityReport {
    double rho = 0.0;
    int nodes = 0;
    double tol_quad = kMeanValueQuadratureTol;
    std::size_t count_used = 0;
    std::size_t skipped = 0;
    std::vector<MeanValuePoint> points;
    std::size_t violations = 0;
};

/// Mean-value test of T*(., F) at interior grid points: a violation is a
/// difference below -(3 std_error + tol_quad). rho <= 0 selects the default.
SubharmonicityReport subharmonicity_report(const MeroFunction& f, const GridSpec& spec, const DirectionSample& sample,
                                           const EvalOptions& options = {}, double rho = 0.0, int nodes = 8,
                                           double tol_quad = kMeanValueQuadratureTol);

}  // namespace starfn
