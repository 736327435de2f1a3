#include "starfn/roots.hpp"

#include "starfn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace starfn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIterations = 2000;

// Starting points on circles whose radii come from the upper convex hull of
// (k, log|a_k|); each hull edge spanning m degrees contributes m points.
std::vector<Complex> initial_guesses(std::span<const Complex> a) {
    const int d = static_cast<int>(a.size()) - 1;
    std::vector<int> idx;
    std::vector<double> lg(a.size());
    for (int k = 0; k <= d; ++k)
        lg[k] = a[k] == Complex{} ? -std::numeric_limits<double>::infinity() : std::log(std::abs(a[k]));
    for (int k = 0; k <= d; ++k) {
        if (!std::isfinite(lg[k])) continue;
        while (idx.size() >= 2) {
            int i = idx[idx.size() - 2], j = idx.back();
            // drop j if it lies on or below the chord from i to k
            if ((lg[j] - lg[i]) * (k - i) <= (lg[k] - lg[i]) * (j - i))
                idx.pop_back();
            else
                break;
        }
        idx.push_back(k);
    }
    std::vector<Complex> z;
    z.reserve(d);
    constexpr double kOffset = 0.7;
    for (std::size_t s = 0; s + 1 < idx.size(); ++s) {
        int m = idx[s + 1] - idx[s];
        double radius = std::exp((lg[idx[s]] - lg[idx[s + 1]]) / m);
        for (int j = 0; j < m; ++j) {
            double angle = 2.0 * std::numbers::pi * j / m + 2.0 * std::numbers::pi * idx[s] / d + kOffset;
            z.push_back(std::polar(radius, angle));
        }
    }
    return z;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

int RootSet::total_multiplicity() const {
    int total = 0;
    for (const auto& r : roots) total += r.multiplicity;
    return total;
}

RootSet find_roots(const UniPoly& p) {
    if (p.is_zero()) throw DomainError("root finding on the zero polynomial");
    const int d = p.degree();
    RootSet out;
    if (d == 0) return out;
    auto a = p.coefficients();
    if (d == 1) {
        Complex z = -a[0] / a[1];
        out.roots.push_back({z, 1});
        out.residual_bound = std::abs(p(z));
        return out;
    }

    // Roots at the origin are split off exactly.
    int zero_mult = 0;
    while (a[zero_mult] == Complex{}) ++zero_mult;
    std::vector<Complex> reduced(a.begin() + zero_mult, a.end());
    UniPoly q(reduced);
    const int dq = q.degree();

    std::vector<Complex> z = dq > 0 ? initial_guesses(q.coefficients()) : std::vector<Complex>{};
    std::vector<bool> done(z.size(), false);
    std::size_t remaining = z.size();
    for (int iter = 0; remaining > 0; ++iter) {
        if (iter >= kMaxIterations)
            throw ConvergenceError("root iteration exceeded " + std::to_string(kMaxIterations) + " steps (degree " +
                                   std::to_string(d) + ")");
        for (std::size_t i = 0; i < z.size(); ++i) {
            if (done[i]) continue;
            auto [v, dv] = q.value_and_derivative(z[i]);
            double absz = std::abs(z[i]);
            if (std::abs(v) <= 4.0 * kEps * q.magnitude_bound(absz)) {
                done[i] = true;
                --remaining;
                continue;
            }
            Complex sum{};
            for (std::size_t j = 0; j < z.size(); ++j)
                if (j != i) sum += 1.0 / (z[i] - z[j]);
            Complex w;
            if (dv == Complex{}) {
                w = Complex(absz + 1.0, 0.0) * 1e-6;
            } else {
                Complex ratio = v / dv;
                w = ratio / (1.0 - ratio * sum);
            }
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag())) w = Complex(absz + 1.0, 0.0) * 1e-6;
            z[i] -= w;
            if (std::abs(w) <= 2.0 * kEps * std::abs(z[i])) {
                done[i] = true;
                --remaining;
            }
        }
    }

    // Gerschgorin-type inclusion radii, inflated by the rounding error of
    // evaluating q at the approximation.
    const std::size_t m = z.size();
    std::vector<double> radius(m, 0.0);
    const double lead = std::abs(q.coefficients().back());
    for (std::size_t i = 0; i < m; ++i) {
        double denom = lead;
        for (std::size_t j = 0; j < m; ++j)
            if (j != i) denom *= std::abs(z[i] - z[j]);
        double num = static_cast<double>(m) *
                     (std::abs(q(z[i])) + 4.0 * kEps * q.magnitude_bound(std::abs(z[i])));
        radius[i] = denom > 0.0 ? num / denom : std::numeric_limits<double>::infinity();
    }
    UnionFind clusters(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            double dist = std::abs(z[i] - z[j]);
            double scale = 1.0 + std::max(std::abs(z[i]), std::abs(z[j]));
            if (dist <= 1e-8 * scale || dist <= radius[i] + radius[j]) clusters.unite(i, j);
        }
    std::vector<Complex> centre_sum(m);
    std::vector<int> count(m, 0);
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t c = clusters.find(i);
        centre_sum[c] += z[i];
        ++count[c];
    }
    if (zero_mult > 0) out.roots.push_back({Complex{}, zero_mult});
    for (std::size_t i = 0; i < m; ++i)
        if (count[i] > 0) out.roots.push_back({centre_sum[i] / static_cast<double>(count[i]), count[i]});

    std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
        double ax = std::abs(x.location), ay = std::abs(y.location);
        if (ax != ay) return ax < ay;
        return std::arg(x.location) < std::arg(y.location);
    });
    for (const auto& r : out.roots) out.residual_bound = std::max(out.residual_bound, std::abs(p(r.location)));
    return out;
}

RootSet roots_in_disk(const RootSet& roots, double radius) {
    RootSet out;
    for (const auto& r : roots.roots)
        if (std::abs(r.location) <= radius) out.roots.push_back(r);
    out.residual_bound = roots.residual_bound;
    return out;
}

RootSet roots_in_disk(const UniPoly& p, double radius) { return roots_in_disk(find_roots(p), radius); }

}  // namespace starfn
