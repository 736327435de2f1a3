#include "starfn/slicing.hpp"

#include "starfn/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

namespace starfn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

UniPoly restrict_to_line(const MultiPoly& p, std::span<const Complex> zeta) {
    const unsigned deg = p.degree();
    std::vector<Complex> coeffs(deg + 1);
    std::vector<double> scale(deg + 1, 0.0);
    for (const auto& [e, c] : p.terms()) {
        Complex term = c;
        for (std::size_t j = 0; j < e.size(); ++j)
            for (unsigned k = 0; k < e[j]; ++k) term *= zeta[j];
        unsigned d = total_degree(e);
        coeffs[d] += term;
        scale[d] += std::abs(term);
    }
    for (unsigned d = 0; d <= deg; ++d)
        if (std::abs(coeffs[d]) <= 8.0 * kEps * scale[d]) coeffs[d] = Complex{};
    return UniPoly(std::move(coeffs));
}

double cancel_tolerance(double tol, Complex z) { return tol * std::max(1.0, std::abs(z)); }

}  // namespace

Direction::Direction(std::vector<Complex> components) : components_(std::move(components)) {
    if (components_.empty()) throw DomainError("direction must have at least one component");
    double norm2 = 0.0;
    for (auto c : components_) norm2 += std::norm(c);
    if (!(std::abs(std::sqrt(norm2) - 1.0) <= 1e-14)) throw DomainError("direction is not a unit vector");
}

Direction Direction::normalized(std::vector<Complex> components) {
    double norm2 = 0.0;
    for (auto c : components) norm2 += std::norm(c);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw DomainError("cannot normalize a zero or non-finite vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& c : components) c *= inv;
    return Direction(std::move(components));
}

SlicePair make_slice(const MeroFunction& f, const Direction& zeta) {
    if (zeta.dimension() != f.dimension()) throw DomainError("direction dimension does not match function");
    return SlicePair{zeta, restrict_to_line(f.numerator(), zeta.components()),
                     restrict_to_line(f.denominator(), zeta.components())};
}

SliceDivisor slice_divisor(const SlicePair& slice, double tol) { return rational_divisor(slice.g, slice.h, tol); }

SliceDivisor rational_divisor(const UniPoly& g, const UniPoly& h, double tol) {
    SliceDivisor out;
    out.raw_zeros = find_roots(g);
    out.raw_poles = find_roots(h);

    out.separation = std::numeric_limits<double>::infinity();
    std::vector<std::tuple<double, std::size_t, std::size_t>> close;
    for (std::size_t i = 0; i < out.raw_zeros.roots.size(); ++i)
        for (std::size_t j = 0; j < out.raw_poles.roots.size(); ++j) {
            Complex a = out.raw_zeros.roots[i].location, b = out.raw_poles.roots[j].location;
            double dist = std::abs(a - b);
            out.separation = std::min(out.separation, dist);
            if (dist <= cancel_tolerance(tol, a)) close.emplace_back(dist, i, j);
        }
    out.indeterminate = !close.empty();

    std::vector<int> zm, pm;
    for (const auto& r : out.raw_zeros.roots) zm.push_back(r.multiplicity);
    for (const auto& r : out.raw_poles.roots) pm.push_back(r.multiplicity);
    std::sort(close.begin(), close.end());
    for (auto [dist, i, j] : close) {
        int k = std::min(zm[i], pm[j]);
        zm[i] -= k;
        pm[j] -= k;
    }
    out.zeros.residual_bound = out.raw_zeros.residual_bound;
    out.poles.residual_bound = out.raw_poles.residual_bound;
    for (std::size_t i = 0; i < zm.size(); ++i)
        if (zm[i] > 0) out.zeros.roots.push_back({out.raw_zeros.roots[i].location, zm[i]});
    for (std::size_t j = 0; j < pm.size(); ++j)
        if (pm[j] > 0) out.poles.roots.push_back({out.raw_poles.roots[j].location, pm[j]});
    return out;
}

int counting_small_n(const SliceDivisor& divisor, double t, Target a) {
    if (!(t > 0.0)) throw DomainError("counting radius must be positive");
    const RootSet& set = a == Target::zero ? divisor.zeros : divisor.poles;
    int n = 0;
    for (const auto& r : set.roots)
        if (std::abs(r.location) <= t) n += r.multiplicity;
    return n;
}

double counting_big_N(const SliceDivisor& divisor, double r, Target a) {
    if (!(r > 0.0)) throw DomainError("counting radius must be positive");
    const RootSet& set = a == Target::zero ? divisor.zeros : divisor.poles;
    double total = 0.0;
    for (const auto& root : set.roots) {
        double modulus = std::abs(root.location);
        if (modulus <= r) total += root.multiplicity * std::log(r / modulus);
    }
    return total;
}

int counting_small_n(const MeroFunction& f, const Direction& zeta, double t, Target a) {
    return counting_small_n(slice_divisor(make_slice(f, zeta)), t, a);
}

double counting_big_N(const MeroFunction& f, const Direction& zeta, double r, Target a) {
    return counting_big_N(slice_divisor(make_slice(f, zeta)), r, a);
}

CountingRecord counting_record(const MeroFunction& f, const Direction& zeta, double r, Target a) {
    SliceDivisor d = slice_divisor(make_slice(f, zeta));
    return CountingRecord{r, a, counting_small_n(d, r, a), counting_big_N(d, r, a)};
}

Indeterminacy indeterminacy_test(const MeroFunction& f, const Direction& zeta, double tol) {
    SliceDivisor d = slice_divisor(make_slice(f, zeta), tol);
    return Indeterminacy{d.indeterminate, d.separation};
}

double jensen_residual(const MeroFunction& f, const Direction& zeta, double r, int samples) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (samples < 1) throw DomainError("sample count must be positive");
    SlicePair slice = make_slice(f, zeta);
    SliceDivisor d = slice_divisor(slice);
    for (const RootSet* set : {&d.raw_zeros, &d.raw_poles})
        for (const auto& root : set->roots)
            if (std::abs(std::abs(root.location) - r) <= 1e-3 * r)
                throw DomainError("a zero or pole lies within 1e-3 r of the circle |z| = r");

    const double h = 2.0 * std::numbers::pi / samples;
    double sum = 0.0;
    for (int i = 0; i < samples; ++i) {
        Complex w = std::polar(r, -std::numbers::pi + (i + 0.5) * h);
        sum += 0.5 * std::log(std::norm(slice.g(w)) / std::norm(slice.h(w)));
    }
    double mean = sum / samples;
    return std::abs(counting_big_N(d, r, Target::zero) - counting_big_N(d, r, Target::pole) - mean);
}

}  // namespace starfn
