#pragma once

#include "starfn/polynomial.hpp"

#include <vector>

namespace starfn {

struct Root {
    Complex location;
    int multiplicity = 1;
};

/// Roots of a univariate polynomial with multiplicities.
/// `residual_bound` is the largest |p(root)| over the reported locations.
struct RootSet {
    std::vector<Root> roots;
    double residual_bound = 0.0;

    int total_multiplicity() const;
};

/// All roots of a nonzero polynomial, by Aberth-Ehrlich iteration started from
/// Newton-polygon radii. Approximations whose distance is within
/// 1e-8 * (1 + |z|), or whose rounding-aware inclusion disks overlap, are
/// merged into one root of the combined multiplicity.
///
/// Throws DomainError for the zero polynomial and ConvergenceError when the
/// iteration does not settle.
RootSet find_roots(const UniPoly& p);

/// The subset of `roots` in the closed disk |z| <= radius.
RootSet roots_in_disk(const RootSet& roots, double radius);
RootSet roots_in_disk(const UniPoly& p, double radius);

}  // namespace starfn
