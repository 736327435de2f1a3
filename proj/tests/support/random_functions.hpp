#pragma once

#include "starfn/function.hpp"
#include "starfn/harmonic.hpp"
#include "starfn/slicing.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace starfn::testing {

inline Complex complex_normal(std::mt19937_64& rng) {
    std::normal_distribution<double> normal;
    const double re = normal(rng);
    return {re, normal(rng)};
}

// Constant term 1, every other monomial of total degree <= degree gets a
// standard complex normal coefficient.
inline MultiPoly random_polynomial(std::size_t n, unsigned degree, std::mt19937_64& rng) {
    MultiPoly p = MultiPoly::constant(n, 1.0);
    Exponents e(n, 0);
    auto visit = [&](auto&& self, std::size_t var, unsigned left) -> void {
        if (var == n) {
            if (total_degree(e) > 0) p.add_term(e, complex_normal(rng));
            return;
        }
        for (unsigned k = 0; k <= left; ++k) {
            e[var] = k;
            self(self, var + 1, left - k);
        }
        e[var] = 0;
    };
    visit(visit, 0, degree);
    return p;
}

// F = G/H with G(0) = H(0) = 1 and 1 <= deg G, deg H <= max_degree.
inline MeroFunction random_function(std::size_t n, unsigned max_degree, std::mt19937_64& rng) {
    std::uniform_int_distribution<unsigned> deg(1, max_degree);
    const unsigned dg = deg(rng);
    const unsigned dh = deg(rng);
    MultiPoly g = random_polynomial(n, dg, rng);
    MultiPoly h = random_polynomial(n, dh, rng);
    return MeroFunction(std::move(g), std::move(h));
}

inline Direction random_direction(std::size_t n, std::mt19937_64& rng) {
    std::vector<Complex> v(n);
    for (auto& c : v) c = complex_normal(rng);
    return Direction::normalized(std::move(v));
}

// Gram-Schmidt on a complex Gaussian matrix, rows orthonormalized. Row-major.
inline std::vector<Complex> random_unitary(std::size_t n, std::mt19937_64& rng) {
    std::vector<Complex> u(n * n);
    for (auto& c : u) c = complex_normal(rng);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) {
            Complex dot{};
            for (std::size_t j = 0; j < n; ++j) dot += std::conj(u[k * n + j]) * u[i * n + j];
            for (std::size_t j = 0; j < n; ++j) u[i * n + j] -= dot * u[k * n + j];
        }
        double norm = 0.0;
        for (std::size_t j = 0; j < n; ++j) norm += std::norm(u[i * n + j]);
        norm = std::sqrt(norm);
        for (std::size_t j = 0; j < n; ++j) u[i * n + j] /= norm;
    }
    return u;
}

inline std::vector<Complex> apply(const std::vector<Complex>& u, std::span<const Complex> z) {
    const std::size_t n = z.size();
    std::vector<Complex> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out[i] += u[i * n + j] * z[j];
    return out;
}

inline CanonicalProduct random_product(std::mt19937_64& rng, int max_points = 8) {
    std::uniform_real_distribution<double> modulus(0.5, 4.0);
    std::uniform_real_distribution<double> angle(-3.141592653589793, 3.141592653589793);
    std::uniform_real_distribution<double> gamma(0.0, 1.0);
    std::uniform_int_distribution<int> count(0, max_points);
    CanonicalProduct cp;
    cp.gamma = gamma(rng);
    cp.rotation = angle(rng);
    const int total = count(rng);
    std::uniform_int_distribution<int> zeros(0, total);
    const int nz = zeros(rng);
    for (int m = 0; m < nz; ++m) cp.zero_moduli.push_back(modulus(rng));
    for (int m = nz; m < total; ++m) cp.pole_moduli.push_back(modulus(rng));
    return cp;
}

// Coefficients of the canonical product by multiplying truncated series of
// its factors in w = e^{i rot} z, then rotating.
inline std::vector<Complex> product_series_oracle(const CanonicalProduct& cp, int order) {
    std::vector<double> series(order + 1, 0.0);
    series[0] = 1.0;
    auto multiply = [&](const std::vector<double>& factor) {
        std::vector<double> out(order + 1, 0.0);
        for (int i = 0; i <= order; ++i)
            for (int j = 0; i + j <= order; ++j) out[i + j] += series[i] * factor[j];
        series = out;
    };
    std::vector<double> factor(order + 1);
    double term = 1.0;
    for (int k = 0; k <= order; ++k) {
        factor[k] = term;
        term *= cp.gamma / (k + 1);
    }
    multiply(factor);
    for (double r : cp.zero_moduli) {
        std::fill(factor.begin(), factor.end(), 0.0);
        factor[0] = 1.0;
        if (order >= 1) factor[1] = 1.0 / r;
        multiply(factor);
    }
    for (double s : cp.pole_moduli) {
        for (int k = 0; k <= order; ++k) factor[k] = std::pow(1.0 / s, k);
        multiply(factor);
    }
    std::vector<Complex> out(order + 1);
    for (int k = 0; k <= order; ++k) out[k] = series[k] * std::polar(1.0, k * cp.rotation);
    return out;
}

}  // namespace starfn::testing
