#include "random_functions.hpp"

#include "starfn/error.hpp"
#include "starfn/harmonic.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace starfn;

namespace {

constexpr double kPi = std::numbers::pi;

CanonicalProduct product(double gamma, double rotation, std::vector<double> zeros, std::vector<double> poles) {
    CanonicalProduct cp;
    cp.gamma = gamma;
    cp.rotation = rotation;
    cp.zero_moduli = std::move(zeros);
    cp.pole_moduli = std::move(poles);
    return cp;
}

// F(Z) = P(Z . eta) for a gamma = 0 product P.
MeroFunction compose_product(const CanonicalProduct& cp, const std::vector<Complex>& eta) {
    const std::size_t n = eta.size();
    MultiPoly line(n);
    for (std::size_t j = 0; j < n; ++j) line += eta[j] * MultiPoly::variable(n, j);
    const Complex rot = std::polar(1.0, cp.rotation);
    MultiPoly g = MultiPoly::constant(n, 1.0);
    MultiPoly h = MultiPoly::constant(n, 1.0);
    for (double r : cp.zero_moduli) g *= MultiPoly::constant(n, 1.0) + (rot / r) * line;
    for (double s : cp.pole_moduli) h *= MultiPoly::constant(n, 1.0) - (rot / s) * line;
    return MeroFunction(g, h);
}

double relative_gap(Complex a, Complex b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("Taylor coefficients of simple products") {
    const TaylorCoeffs lin = product_taylor_coeffs(product(0, 0, {1.0}, {}), 6);
    REQUIRE(lin.coeffs.size() == 7);
    CHECK(std::abs(lin.coeffs[0] - 1.0) <= 1e-15);
    CHECK(std::abs(lin.coeffs[1] - 1.0) <= 1e-15);
    for (int k = 2; k <= 6; ++k) CHECK(std::abs(lin.coeffs[k]) <= 1e-15);

    const TaylorCoeffs geo = product_taylor_coeffs(product(0, 0, {}, {1.0}), 10);
    double factorial = 1.0;
    for (int k = 0; k <= 10; ++k) {
        if (k > 0) factorial *= k;
        CHECK(std::abs(geo.coeffs[k] - 1.0) <= 1e-14);
        CHECK(std::abs(geo.d_values[k] - factorial) <= 1e-14 * factorial);
    }

    const TaylorCoeffs mobius = product_taylor_coeffs(product(0, 0, {1.0}, {1.0}), 10);
    CHECK(std::abs(mobius.coeffs[0] - 1.0) <= 1e-15);
    for (int k = 1; k <= 10; ++k) CHECK(std::abs(mobius.coeffs[k] - 2.0) <= 1e-13);
    CHECK(mobius.c_sums[1] == doctest::Approx(2.0));
    CHECK(mobius.c_sums[2] == doctest::Approx(0.0));

    const TaylorCoeffs expo = product_taylor_coeffs(product(1.5, 0, {}, {}), 8);
    double term = 1.0;
    for (int k = 0; k <= 8; ++k) {
        CHECK(std::abs(expo.coeffs[k] - term) <= 1e-14);
        term *= 1.5 / (k + 1);
    }

    CHECK_THROWS_AS(product_taylor_coeffs(product(-1.0, 0, {}, {}), 4), DomainError);
    CHECK_THROWS_AS(product_taylor_coeffs(product(0, 0, {0.0}, {}), 4), DomainError);
    CHECK_THROWS_AS(product_taylor_coeffs(product(0, 0, {1.0}, {}), -1), DomainError);
}

TEST_CASE("random products: reality, series oracle and phase law") {
    std::mt19937_64 rng(2718);
    for (int trial = 0; trial < 200; ++trial) {
        const CanonicalProduct cp = testing::random_product(rng);
        const TaylorCoeffs t = product_taylor_coeffs(cp, 12);
        for (int k = 0; k <= 12; ++k) CHECK(std::abs(t.d_imag[k]) <= 1e-12 * (1.0 + std::abs(t.d_values[k])));
        CHECK(t.reality_defect() <= 1e-12);

        const auto oracle = testing::product_series_oracle(cp, 12);
        double scale = 0.0;
        for (const auto& c : oracle) scale = std::max(scale, std::abs(c));
        for (int k = 0; k <= 12; ++k) CHECK(std::abs(t.coeffs[k] - oracle[k]) <= 1e-12 * scale);

        // f^(k)(0) = (d_k / d_1^k) f'(0)^k
        if (std::abs(t.d_values[1]) > 1e-8) {
            double factorial = 1.0;
            for (int k = 1; k <= 12; ++k) {
                factorial *= k;
                const Complex lhs = factorial * t.coeffs[k];
                const Complex rhs = t.d_values[k] / std::pow(t.d_values[1], k) * std::pow(t.coeffs[1], k);
                CHECK(std::abs(lhs - rhs) <= 1e-11 * std::max(std::abs(lhs), 1e-300) + 1e-300);
            }
        }
    }
}

TEST_CASE("canonical product JSON") {
    const CanonicalProduct cp =
        canonical_product_from_json_text(R"({"gamma": 0.5, "theta": 1.0, "zeros": [2, 3], "poles": [1.5]})");
    CHECK(cp.gamma == 0.5);
    CHECK(cp.rotation == 1.0);
    CHECK(cp.zero_moduli == std::vector<double>{2.0, 3.0});
    CHECK(cp.pole_moduli == std::vector<double>{1.5});
    const CanonicalProduct bare = canonical_product_from_json_text("{}");
    CHECK(bare.gamma == 0.0);
    CHECK(bare.zero_moduli.empty());
    CHECK_THROWS_AS(canonical_product_from_json_text("{\"gamma\": "), ParseError);
    CHECK_THROWS_AS(canonical_product_from_json_text(R"({"zeros": "x"})"), ParseError);
    CHECK_THROWS_AS(canonical_product_from_json_text(R"({"zeros": [-1]})"), DomainError);
    CHECK_THROWS_AS(load_canonical_product_json("/nonexistent/product.json"), IoError);

    const Complex z(0.3, -0.2);
    const Complex w = std::polar(1.0, 1.0) * z;
    const Complex direct = std::exp(0.5 * w) * (1.0 + w / 2.0) * (1.0 + w / 3.0) / (1.0 - w / 1.5);
    CHECK(std::abs(cp.evaluate(z) - direct) <= 1e-14);
}

TEST_CASE("ray alignment") {
    const std::vector<Complex> none;
    const RayAlignment a = ray_alignment(std::vector<Complex>{-2.0, -2.0}, none, 1e-9);
    CHECK(a.aligned);
    CHECK(a.theta_defined);
    CHECK(std::abs(a.theta_hat) <= 1e-15);

    CHECK_FALSE(ray_alignment(std::vector<Complex>{1.0, -1.0}, none, 1e-6).aligned);

    const RayAlignment b =
        ray_alignment(std::vector<Complex>{Complex(0, 2), Complex(0, 5)}, std::vector<Complex>{Complex(0, -3)}, 1e-9);
    CHECK(b.aligned);
    CHECK(std::abs(b.theta_hat - kPi / 2) <= 1e-12);
    // rotated zeros are negative reals and poles positive reals
    CHECK(std::abs(std::polar(1.0, b.theta_hat) * Complex(0, 2) - Complex(-2.0)) <= 1e-12);

    const RayAlignment empty = ray_alignment(none, none, 1e-9);
    CHECK(empty.aligned);
    CHECK_FALSE(empty.theta_defined);

    CHECK_FALSE(ray_alignment(std::vector<Complex>{-1.0}, std::vector<Complex>{-2.0}, 1e-6).aligned);
    CHECK_THROWS_AS(ray_alignment(std::vector<Complex>{0.0}, none, 1e-6), DomainError);
}

TEST_CASE("detecting the harmonic form") {
    const MeroFunction f = parse_function("1 + (z1 + 2*z2) + 0.25*(z1 + 2*z2)^2", 2);
    const DetectionReport rep = detect_harmonic_form(f);
    REQUIRE(rep.detected);
    REQUIRE(rep.form);
    CHECK(std::abs(rep.form->eta[0] - 1.0) <= 1e-14);
    CHECK(std::abs(rep.form->eta[1] - 2.0) <= 1e-14);
    REQUIRE(rep.form->profile.size() >= 3);
    CHECK(std::abs(rep.form->profile[0] - 1.0) <= 1e-14);
    CHECK(std::abs(rep.form->profile[1] - 1.0) <= 1e-14);
    CHECK(std::abs(rep.form->profile[2] - 0.25) <= 1e-14);
    CHECK(rep.form->residual <= 1e-12);
    CHECK(verify_harmonic_form(f, *rep.form, 1000, 3) <= 1e-10);

    const DetectionReport product = detect_harmonic_form(parse_function("1 - z1*z2", 2));
    CHECK_FALSE(product.detected);
    CHECK_FALSE(product.reason.empty());

    // zeros of 1 - w^2 lie on a line through 0; this is caught by the vanishing linear part
    CHECK_FALSE(detect_harmonic_form(parse_function("1 - (z1 + 2*z2)^2", 2)).detected);
    // (1 + w)(1 - w/2) passes the coefficient test but its zeros are on opposite rays
    const DetectionReport opposite = detect_harmonic_form(parse_function("(1 + z1 + 2*z2)*(1 - 0.5*z1 - z2)", 2));
    CHECK_FALSE(opposite.detected);
    CHECK(opposite.ray);
    CHECK_FALSE(opposite.ray->aligned);

    const DetectionReport one = detect_harmonic_form(MeroFunction::one(3));
    REQUIRE(one.detected);
    CHECK(one.form->trivial());
    CHECK(verify_harmonic_form(MeroFunction::one(3), *one.form, 100, 1) == 0.0);

    const MeroFunction mobius = parse_function("(1 + z1 - z2)/(1 - z1 + z2)", 2);
    const DetectionReport m = detect_harmonic_form(mobius);
    REQUIRE(m.detected);
    CHECK(verify_harmonic_form(mobius, *m.form, 500, 2) <= 1e-10);
    for (std::size_t k = 1; k < m.form->profile.size(); ++k)
        CHECK(std::abs(m.form->profile[k] - std::pow(0.5, static_cast<double>(k) - 1.0)) <= 1e-12);
}

TEST_CASE("perturbations are noticed") {
    const MeroFunction f = parse_function("(1 + 0.5*z1 + z2)^2", 2);
    const DetectionReport rep = detect_harmonic_form(f);
    REQUIRE(rep.detected);
    const MeroFunction g = parse_function("(1 + 0.5*z1 + z2)^2 + 0.001*z1^2", 2);
    CHECK(verify_harmonic_form(g, *rep.form, 1000, 7) >= 1e-4);
    CHECK_FALSE(detect_harmonic_form(g).detected);
}

TEST_CASE("round trip through random products") {
    std::mt19937_64 rng(161);
    int tested = 0;
    for (int trial = 0; trial < 60; ++trial) {
        CanonicalProduct cp = testing::random_product(rng, 4);
        cp.gamma = 0.0;
        std::vector<Complex> eta{testing::complex_normal(rng), testing::complex_normal(rng)};
        if (cp.zero_moduli.empty() && cp.pole_moduli.empty()) continue;
        ++tested;
        const MeroFunction f = compose_product(cp, eta);
        const DetectionReport rep = detect_harmonic_form(f);
        REQUIRE(rep.detected);
        const TaylorCoeffs t = product_taylor_coeffs(cp, static_cast<int>(rep.form->profile.size()) - 1);
        // the detected form is normalized to unit linear coefficient
        const Complex a1 = t.coeffs[1];
        for (std::size_t j = 0; j < 2; ++j) CHECK(relative_gap(rep.form->eta[j], a1 * eta[j]) <= 1e-10);
        for (std::size_t k = 0; k < rep.form->profile.size(); ++k)
            CHECK(relative_gap(rep.form->profile[k], t.coeffs[k] / std::pow(a1, static_cast<double>(k))) <= 1e-10);
        CHECK(verify_harmonic_form(f, *rep.form, 200, trial) <= 1e-9);
    }
    CHECK(tested >= 40);
}

TEST_CASE("diagonal unitary scaling transforms eta covariantly") {
    const MeroFunction f = parse_function("(1 + 0.5*z1 + z2)^2/(1 - 0.1*z1 - 0.2*z2)", 2);
    const DetectionReport a = detect_harmonic_form(f);
    REQUIRE(a.detected);
    const Complex d0 = std::polar(1.0, 0.7), d1 = std::polar(1.0, -2.1);
    const std::vector<Complex> diag{d0, 0.0, 0.0, d1};
    const DetectionReport b = detect_harmonic_form(compose_linear(f, diag));
    REQUIRE(b.detected);
    CHECK(std::abs(b.form->eta[0] - d0 * a.form->eta[0]) <= 1e-12);
    CHECK(std::abs(b.form->eta[1] - d1 * a.form->eta[1]) <= 1e-12);
    REQUIRE(a.form->profile.size() == b.form->profile.size());
    for (std::size_t k = 0; k < a.form->profile.size(); ++k)
        CHECK(std::abs(a.form->profile[k] - b.form->profile[k]) <= 1e-12);
}

TEST_CASE("Taylor series of rational functions") {
    const MultiPoly s = taylor_series(parse_function("1/(1 - z1)", 2), 5);
    for (unsigned k = 0; k <= 5; ++k) CHECK(std::abs(s.coefficient({k, 0}) - 1.0) <= 1e-15);
    CHECK(s.degree() == 5);

    std::mt19937_64 rng(8);
    const MeroFunction f = testing::random_function(2, 3, rng);
    const MultiPoly t = taylor_series(f, 12);
    const std::vector<Complex> z{Complex(0.01, 0.02), Complex(-0.015, 0.005)};
    CHECK(std::abs(t.evaluate(z) - f.evaluate(z)) <= 1e-12);
}

TEST_CASE("slice harmonicity") {
    const GridSpec spec{};
    CHECK(slice_harmonicity_test(MeroFunction::one(2), Direction({0.8, 0.6}), spec, 1024, 1e-3));

    const MeroFunction harmonic = parse_function("(1 + 0.5*z1 + z2)^2", 2);
    const SliceHarmonicity h = slice_harmonicity(harmonic, Direction({1.0, 0.0}), spec, 8192, 1e-3);
    CHECK(h.harmonic);
    CHECK(h.max_defect <= 1e-3);

    const MeroFunction product = parse_function("(1 + z1)*(1 + 2*z2)", 2);
    const SliceHarmonicity p = slice_harmonicity(product, Direction({0.6, Complex(0.0, 0.8)}), spec, 8192, 1e-3);
    CHECK_FALSE(p.harmonic);
    CHECK(p.max_defect > 1e-3);
    CHECK(p.worst_r > spec.r_min);
    CHECK(p.worst_r < spec.r_max);
    CHECK(p.worst_theta > spec.theta_min);
    CHECK(p.worst_theta < spec.theta_max);
}
