#pragma once

#include "starfn/sphere.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace starfn {

/// One-variable function e^{gamma e^{i rot} z} prod(1 + e^{i rot} z / r_m) / prod(1 - e^{i rot} z / s_m)
/// with gamma >= 0 and positive moduli: zeros on one ray, poles on the opposite one.
struct CanonicalProduct {
    double gamma = 0.0;
    double rotation = 0.0;
    std::vector<double> zero_moduli;
    std::vector<double> pole_moduli;

    void validate() const;
    Complex evaluate(Complex z) const;
};

/// Reads {"gamma": real, "theta": real, "zeros": [...], "poles": [...]}.
CanonicalProduct canonical_product_from_json_text(std::string_view text);
CanonicalProduct load_canonical_product_json(const std::filesystem::path& path);

struct TaylorCoeffs {
    int order = 0;
    std::vector<Complex> coeffs;    ///< f^{(k)}(0) / k!
    std::vector<double> c_sums;     ///< c(k) for k >= 1; c_sums[0] is unused and 0
    std::vector<double> d_values;   ///< real part of f^{(k)}(0) e^{-ik rot}
    std::vector<double> d_imag;     ///< imaginary residue of the same, the reality certificate

    /// max over k of |Im d_k| / (1 + |d_k|)
    double reality_defect() const;
};

/// Taylor data at 0 from the power sums c(k) through the log-derivative
/// recursion f^{(m+1)}(0) = sum_k binom(m,k) k! c(k+1) e^{i(k+1) rot} f^{(m-k)}(0).
TaylorCoeffs product_taylor_coeffs(const CanonicalProduct& cp, int order);

struct RayAlignment {
    bool aligned = false;
    bool theta_defined = false;
    double theta_hat = 0.0;      ///< rotation putting zeros on the negative axis, in (-pi, pi]
    double max_deviation = 0.0;  ///< largest angular distance from the fitted rays
};

/// Checks that all zeros share one argument and all poles the opposite one.
/// With no zeros and no poles the result is aligned with theta undefined.
RayAlignment ray_alignment(std::span<const Complex> zeros, std::span<const Complex> poles, double tol_angle);

constexpr double kRealityTol = 1e-9;
constexpr double kRayAngleTol = 1e-6;

/// F(Z) = P(Z . eta) with P(w) = F(w / eta_j e_j) for the coordinate j of
/// largest |eta_j|, stored as an exact rational restriction and as Taylor
/// profile coefficients (profile[0] = profile[1] = 1 unless eta = 0).
struct HarmonicForm {
    std::vector<Complex> eta;
    std::vector<Complex> profile;
    UniPoly p_numerator;
    UniPoly p_denominator;
    double residual = 0.0;

    bool trivial() const;
    Complex evaluate_profile(Complex w) const;
};

struct DetectionReport {
    bool detected = false;
    std::optional<HarmonicForm> form;
    std::vector<double> per_degree_residuals;
    std::vector<double> imaginary_parts;
    std::optional<RayAlignment> ray;
    int order = 0;
    std::string reason;
};

/// Truncated Taylor expansion of G/H at 0 through total degree `order`.
MultiPoly taylor_series(const MeroFunction& f, unsigned order);

/// Decides whether F = P(Z . eta) with P of canonical-product form. Requires
/// the homogeneous parts to satisfy P_k = c_k P_1^k with real c_k up to
/// `order` (default deg G + deg H) and the zeros and poles of the reconstructed
/// P to lie on opposite rays.
DetectionReport detect_harmonic_form(const MeroFunction& f, double tol = kRealityTol, int order = -1,
                                     double tol_angle = kRayAngleTol);

/// max over random Z in the unit polydisk of |F(Z) - P(Z . eta)| / (1 + |F(Z)|).
double verify_harmonic_form(const MeroFunction& f, const HarmonicForm& form, int trials, std::uint64_t seed);

/// Mean-value equality of T*(., F_zeta) at every interior grid point:
/// |circle mean - centre| <= tol.
struct SliceHarmonicity {
    bool harmonic = true;
    double max_defect = 0.0;
    double worst_r = 0.0;
    double worst_theta = 0.0;
};

SliceHarmonicity slice_harmonicity(const MeroFunction& f, const Direction& zeta, const GridSpec& spec,
                                   int circle_samples, double tol, double rho = 0.0, int nodes = 8);

bool slice_harmonicity_test(const MeroFunction& f, const Direction& zeta, const GridSpec& spec, int circle_samples,
                            double tol);

}  // namespace starfn
