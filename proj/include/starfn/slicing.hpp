#pragma once

#include "starfn/function.hpp"
#include "starfn/roots.hpp"

#include <vector>

namespace starfn {

/// Counted value: zeros (a = 0) or poles (a = infinity).
enum class Target { zero, pole };

constexpr double kIndeterminacyTol = 1e-9;

/// Unit vector in C^n; the norm is checked to within 1e-14 at construction.
class Direction {
public:
    explicit Direction(std::vector<Complex> components);

    /// Scales `components` to unit norm. Throws DomainError for the zero vector.
    static Direction normalized(std::vector<Complex> components);

    std::size_t dimension() const noexcept { return components_.size(); }
    std::span<const Complex> components() const noexcept { return components_; }
    Complex operator[](std::size_t i) const { return components_[i]; }

private:
    std::vector<Complex> components_;
};

/// One-variable restriction F(z zeta) = g(z) / h(z).
struct SlicePair {
    Direction direction;
    UniPoly g;
    UniPoly h;
};

/// Substitutes z * zeta into G and H and collects powers of z. Coefficients
/// that are pure cancellation noise (below 8 eps times the sum of the
/// magnitudes that produced them) are set to zero.
SlicePair make_slice(const MeroFunction& f, const Direction& zeta);

/// Zeros and poles of a slice. `zeros`/`poles` have common roots of g and h
/// (within tol * max(1, |z|)) cancelled; the raw root sets are kept as well.
struct SliceDivisor {
    RootSet zeros;
    RootSet poles;
    RootSet raw_zeros;
    RootSet raw_poles;
    bool indeterminate = false;
    /// Minimum distance between a root of g and a root of h; +inf if either is empty.
    double separation = 0.0;
};

SliceDivisor slice_divisor(const SlicePair& slice, double tol = kIndeterminacyTol);
/// Same for an arbitrary ratio g / h of univariate polynomials.
SliceDivisor rational_divisor(const UniPoly& g, const UniPoly& h, double tol = kIndeterminacyTol);

/// n(t, a; F_zeta): points of the divisor in the closed disk |z| <= t.
int counting_small_n(const SliceDivisor& divisor, double t, Target a);
/// N(r, a; F_zeta) = sum over |z_j| <= r of m_j log(r / |z_j|).
double counting_big_N(const SliceDivisor& divisor, double r, Target a);

int counting_small_n(const MeroFunction& f, const Direction& zeta, double t, Target a);
double counting_big_N(const MeroFunction& f, const Direction& zeta, double r, Target a);

struct CountingRecord {
    double r = 0.0;
    Target a = Target::zero;
    int small_n = 0;
    double big_N = 0.0;
};

CountingRecord counting_record(const MeroFunction& f, const Direction& zeta, double r, Target a);

struct Indeterminacy {
    bool flag = false;
    double separation = 0.0;
};

/// Whether g and h have (numerically) a common root: the slice direction lies
/// in the indeterminacy set.
Indeterminacy indeterminacy_test(const MeroFunction& f, const Direction& zeta, double tol = kIndeterminacyTol);

/// |N(r,0) - N(r,inf) - mean of log|F(r e^{ix} zeta)| over M midpoint nodes|.
/// Throws DomainError if a root of g or h lies within 1e-3 r of |z| = r.
double jensen_residual(const MeroFunction& f, const Direction& zeta, double r, int samples);

}  // namespace starfn
