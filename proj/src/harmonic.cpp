#include "starfn/harmonic.hpp"

#include "starfn/error.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace starfn {

namespace {

double wrap_angle(double x) {
    double w = std::remainder(x, 2.0 * std::numbers::pi);
    return w <= -std::numbers::pi ? w + 2.0 * std::numbers::pi : w;
}

// Coefficients of w -> p(w * scale * e_j): only pure powers of z_j survive.
UniPoly restrict_to_axis(const MultiPoly& p, std::size_t j, Complex scale) {
    std::vector<Complex> coeffs(p.degree() + 1);
    for (const auto& [e, c] : p.terms()) {
        bool pure = true;
        for (std::size_t k = 0; k < e.size(); ++k)
            if (k != j && e[k] != 0) pure = false;
        if (!pure) continue;
        Complex term = c;
        for (unsigned k = 0; k < e[j]; ++k) term *= scale;
        coeffs[e[j]] += term;
    }
    return UniPoly(std::move(coeffs));
}

}  // namespace

void CanonicalProduct::validate() const {
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) throw DomainError("gamma must be a finite nonnegative number");
    if (!std::isfinite(rotation)) throw DomainError("rotation must be finite");
    for (double r : zero_moduli)
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("zero moduli must be positive");
    for (double s : pole_moduli)
        if (!(s > 0.0) || !std::isfinite(s)) throw DomainError("pole moduli must be positive");
}

Complex CanonicalProduct::evaluate(Complex z) const {
    const Complex w = std::polar(1.0, rotation) * z;
    Complex value = std::exp(gamma * w);
    for (double r : zero_moduli) value *= 1.0 + w / r;
    for (double s : pole_moduli) value /= 1.0 - w / s;
    return value;
}

CanonicalProduct canonical_product_from_json_text(std::string_view text) {
    CanonicalProduct cp;
    try {
        auto j = nlohmann::json::parse(text);
        cp.gamma = j.value("gamma", 0.0);
        cp.rotation = j.value("theta", 0.0);
        cp.zero_moduli = j.value("zeros", std::vector<double>{});
        cp.pole_moduli = j.value("poles", std::vector<double>{});
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid canonical product JSON: ") + e.what(), 0);
    }
    cp.validate();
    return cp;
}

CanonicalProduct load_canonical_product_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return canonical_product_from_json_text(ss.str());
}

double TaylorCoeffs::reality_defect() const {
    double worst = 0.0;
    for (std::size_t k = 0; k < d_values.size(); ++k)
        worst = std::max(worst, std::abs(d_imag[k]) / (1.0 + std::abs(d_values[k])));
    return worst;
}

TaylorCoeffs product_taylor_coeffs(const CanonicalProduct& cp, int order) {
    cp.validate();
    if (order < 0) throw DomainError("order must be nonnegative");
    // The power sums alternate in sign for zeros, so the recursion cancels
    // heavily once the coefficients are small next to r^-k; it is evaluated
    // in 113-bit arithmetic and rounded at the end.
    using Quad = boost::multiprecision::cpp_bin_float_quad;
    struct QComplex {
        Quad re, im;
    };
    auto rotation = [&](int k) {
        const Quad angle = Quad(cp.rotation) * k;
        return QComplex{boost::multiprecision::cos(angle), boost::multiprecision::sin(angle)};
    };

    std::vector<Quad> c(order + 2, Quad(0));
    for (int k = 1; k <= order + 1; ++k) {
        Quad sum = k == 1 ? Quad(cp.gamma) : Quad(0);
        for (double r : cp.zero_moduli) {
            const Quad term = boost::multiprecision::pow(Quad(1) / Quad(r), k);
            sum += k % 2 == 1 ? term : Quad(-term);
        }
        for (double s : cp.pole_moduli) sum += boost::multiprecision::pow(Quad(1) / Quad(s), k);
        c[k] = sum;
    }

    // derivatives[m] = f^{(m)}(0)
    std::vector<QComplex> derivatives(order + 1, QComplex{Quad(0), Quad(0)});
    derivatives[0].re = 1;
    for (int m = 0; m + 1 <= order; ++m) {
        QComplex next{Quad(0), Quad(0)};
        Quad falling = 1;  // binom(m, k) k! = m! / (m - k)!
        for (int k = 0; k <= m; ++k) {
            if (k > 0) falling *= (m - k + 1);
            const QComplex e = rotation(k + 1);
            const QComplex& d = derivatives[m - k];
            const Quad w = falling * c[k + 1];
            next.re += w * (e.re * d.re - e.im * d.im);
            next.im += w * (e.re * d.im + e.im * d.re);
        }
        derivatives[m + 1] = next;
    }

    TaylorCoeffs out;
    out.order = order;
    out.c_sums.assign(order + 1, 0.0);
    for (int k = 1; k <= order; ++k) out.c_sums[k] = static_cast<double>(c[k]);
    Quad factorial = 1;
    for (int k = 0; k <= order; ++k) {
        if (k > 0) factorial *= k;
        const QComplex& f = derivatives[k];
        out.coeffs.emplace_back(static_cast<double>(f.re / factorial), static_cast<double>(f.im / factorial));
        const QComplex e = rotation(-k);
        out.d_values.push_back(static_cast<double>(f.re * e.re - f.im * e.im));
        out.d_imag.push_back(static_cast<double>(f.re * e.im + f.im * e.re));
    }
    return out;
}

RayAlignment ray_alignment(std::span<const Complex> zeros, std::span<const Complex> poles, double tol_angle) {
    RayAlignment out;
    if (zeros.empty() && poles.empty()) {
        out.aligned = true;
        return out;
    }
    Complex direction{};
    for (Complex z : zeros) {
        if (z == Complex{}) throw DomainError("ray alignment needs nonzero points");
        direction += z / std::abs(z);
    }
    for (Complex p : poles) {
        if (p == Complex{}) throw DomainError("ray alignment needs nonzero points");
        direction -= p / std::abs(p);
    }
    out.theta_defined = true;
    if (std::abs(direction) <= 1e-12 * static_cast<double>(zeros.size() + poles.size())) {
        out.theta_defined = false;
        out.max_deviation = std::numbers::pi;
        return out;
    }
    const double phi = std::arg(direction);
    for (Complex z : zeros) out.max_deviation = std::max(out.max_deviation, std::abs(wrap_angle(std::arg(z) - phi)));
    for (Complex p : poles)
        out.max_deviation = std::max(out.max_deviation, std::abs(wrap_angle(std::arg(p) - phi - std::numbers::pi)));
    out.aligned = out.max_deviation <= tol_angle;
    out.theta_hat = wrap_angle(std::numbers::pi - phi);
    return out;
}

bool HarmonicForm::trivial() const {
    return std::all_of(eta.begin(), eta.end(), [](Complex c) { return c == Complex{}; });
}

Complex HarmonicForm::evaluate_profile(Complex w) const {
    if (trivial()) return 1.0;
    return p_numerator(w) / p_denominator(w);
}

MultiPoly taylor_series(const MeroFunction& f, unsigned order) {
    const auto g = homogeneous_parts(f.numerator(), order);
    const auto h = homogeneous_parts(f.denominator(), order);
    std::vector<MultiPoly> s;
    s.reserve(order + 1);
    MultiPoly total(f.dimension());
    for (unsigned k = 0; k <= order; ++k) {
        MultiPoly part = g[k];
        for (unsigned j = 1; j <= k; ++j)
            if (!h[j].is_zero() && !s[k - j].is_zero()) part -= h[j] * s[k - j];
        total += part;
        s.push_back(std::move(part));
    }
    return total;
}

DetectionReport detect_harmonic_form(const MeroFunction& f, double tol, int order, double tol_angle) {
    DetectionReport report;
    const std::size_t n = f.dimension();
    const int k_max = order >= 0 ? order : static_cast<int>(f.numerator().degree() + f.denominator().degree());
    report.order = std::max(k_max, 1);
    const auto parts = homogeneous_parts(taylor_series(f, report.order), report.order);

    std::vector<Complex> eta(n);
    for (std::size_t j = 0; j < n; ++j) {
        Exponents e(n, 0);
        e[j] = 1;
        eta[j] = parts[1].coefficient(e);
    }
    const bool eta_zero = std::all_of(eta.begin(), eta.end(), [](Complex c) { return c == Complex{}; });

    if (eta_zero) {
        bool constant = true;
        for (int k = 1; k <= report.order; ++k) {
            const double size = parts[k].max_abs_coefficient();
            report.per_degree_residuals.push_back(size);
            if (size > tol) constant = false;
        }
        if (!constant) {
            report.reason = "linear part vanishes but F is not identically 1";
            return report;
        }
        HarmonicForm form;
        form.eta = eta;
        form.profile = {Complex(1.0)};
        form.p_numerator = UniPoly({1.0});
        form.p_denominator = UniPoly({1.0});
        report.detected = true;
        report.form = std::move(form);
        report.reason = "F is identically 1";
        return report;
    }

    std::size_t probe = 0;
    for (std::size_t j = 1; j < n; ++j)
        if (std::abs(eta[j]) > std::abs(eta[probe])) probe = j;

    MultiPoly linear(n);
    for (std::size_t j = 0; j < n; ++j) linear += eta[j] * MultiPoly::variable(n, j);

    HarmonicForm form;
    form.eta = eta;
    bool coefficients_ok = true;
    MultiPoly linear_power = MultiPoly::constant(n, 1.0);
    for (int k = 0; k <= report.order; ++k) {
        if (k > 0) linear_power *= linear;
        Exponents e(n, 0);
        e[probe] = static_cast<unsigned>(k);
        const Complex ck = parts[k].coefficient(e) / std::pow(eta[probe], k);
        const double size = parts[k].max_abs_coefficient();
        const double residual = size == 0.0 ? 0.0 : (parts[k] - ck * linear_power).max_abs_coefficient() / size;
        report.per_degree_residuals.push_back(residual);
        report.imaginary_parts.push_back(std::abs(ck.imag()));
        form.profile.push_back(ck);
        form.residual = std::max(form.residual, residual);
        if (std::abs(ck.imag()) > tol && coefficients_ok) {
            coefficients_ok = false;
            report.reason = "profile coefficient c_" + std::to_string(k) + " is not real";
        }
        if (residual > tol && coefficients_ok) {
            coefficients_ok = false;
            report.reason = "homogeneous part of degree " + std::to_string(k) + " is not a multiple of P_1^k";
        }
    }
    if (!coefficients_ok) return report;

    const Complex scale = 1.0 / eta[probe];
    form.p_numerator = restrict_to_axis(f.numerator(), probe, scale);
    form.p_denominator = restrict_to_axis(f.denominator(), probe, scale);

    const SliceDivisor divisor = rational_divisor(form.p_numerator, form.p_denominator);
    std::vector<Complex> zeros, poles;
    for (const auto& r : divisor.zeros.roots) zeros.insert(zeros.end(), r.multiplicity, r.location);
    for (const auto& r : divisor.poles.roots) poles.insert(poles.end(), r.multiplicity, r.location);
    RayAlignment ray = ray_alignment(zeros, poles, tol_angle);
    report.ray = ray;
    if (!ray.theta_defined) {
        report.reason = zeros.empty() && poles.empty() ? "profile has neither zeros nor poles"
                                                       : "zeros and poles do not lie on one line through 0";
        return report;
    }
    if (!ray.aligned) {
        report.reason = "zeros are not on one ray with poles on the opposite ray";
        return report;
    }
    if (std::abs(ray.theta_hat) > tol_angle) {
        report.reason = "zeros are not on the negative real axis of the normalized profile";
        return report;
    }
    report.detected = true;
    report.reason = "F(Z) = P(Z . eta) with canonical-product profile";
    report.form = std::move(form);
    return report;
}

double verify_harmonic_form(const MeroFunction& f, const HarmonicForm& form, int trials, std::uint64_t seed) {
    const std::size_t n = f.dimension();
    if (form.eta.size() != n) throw DomainError("form dimension does not match function");
    if (trials < 1) throw DomainError("trial count must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<Complex> z(n);
    double worst = 0.0;
    int attempts = 0;
    for (int t = 0; t < trials;) {
        if (++attempts > 100 * trials + 100) throw DomainError("too many evaluation points landed on poles");
        for (auto& c : z) c = std::polar(std::sqrt(unit(rng)), 2.0 * std::numbers::pi * unit(rng));
        const Complex g = f.numerator().evaluate(z), h = f.denominator().evaluate(z);
        if (std::abs(h) <= 1e-8 * (1.0 + std::abs(g))) continue;
        Complex w{};
        for (std::size_t j = 0; j < n; ++j) w += z[j] * form.eta[j];
        if (!form.trivial() && std::abs(form.p_denominator(w)) <= 1e-8 * (1.0 + std::abs(form.p_numerator(w))))
            continue;
        const Complex value = g / h;
        worst = std::max(worst, std::abs(value - form.evaluate_profile(w)) / (1.0 + std::abs(value)));
        ++t;
    }
    return worst;
}

SliceHarmonicity slice_harmonicity(const MeroFunction& f, const Direction& zeta, const GridSpec& spec,
                                   int circle_samples, double tol, double rho, int nodes) {
    const double radius = rho > 0.0 ? rho : default_test_radius(spec);
    const SliceEvaluator slice(f, zeta);
    const auto defects = slice_mean_value_defects(slice, spec, radius, nodes, circle_samples);
    const auto radii = spec.radii();
    const auto thetas = spec.thetas();
    const std::size_t nj = spec.ntheta - 2;
    SliceHarmonicity out;
    for (std::size_t p = 0; p < defects.size(); ++p) {
        if (std::abs(defects[p]) > out.max_defect) {
            out.max_defect = std::abs(defects[p]);
            out.worst_r = radii[1 + p / nj];
            out.worst_theta = thetas[1 + p % nj];
        }
    }
    out.harmonic = out.max_defect <= tol;
    return out;
}

bool slice_harmonicity_test(const MeroFunction& f, const Direction& zeta, const GridSpec& spec, int circle_samples,
                            double tol) {
    return slice_harmonicity(f, zeta, spec, circle_samples, tol).harmonic;
}

}  // namespace starfn
