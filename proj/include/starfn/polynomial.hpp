#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace starfn {

using Complex = std::complex<double>;

/// Exponent tuple of a monomial; its length equals the variable count.
using Exponents = std::vector<unsigned>;

/// Sparse polynomial in n complex variables with complex coefficients.
///
/// Terms are kept in a map ordered lexicographically by exponent tuple, which
/// fixes the summation order of evaluate() and the printed form. Zero
/// coefficients are never stored.
class MultiPoly {
public:
    explicit MultiPoly(std::size_t n);

    static MultiPoly constant(std::size_t n, Complex c);
    /// The coordinate function z_{index+1} (index is 0-based).
    static MultiPoly variable(std::size_t n, std::size_t index);

    std::size_t dimension() const noexcept { return n_; }
    const std::map<Exponents, Complex>& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    /// Maximum total degree over stored terms; 0 for constants and for zero.
    unsigned degree() const;
    Complex coefficient(const Exponents& e) const;
    Complex constant_term() const;
    double max_abs_coefficient() const;

    /// Adds c to the coefficient of the monomial e.
    void add_term(const Exponents& e, Complex c);

    Complex evaluate(std::span<const Complex> z) const;

    MultiPoly& operator+=(const MultiPoly& other);
    MultiPoly& operator-=(const MultiPoly& other);
    MultiPoly& operator*=(const MultiPoly& other);
    MultiPoly& operator*=(Complex c);

    MultiPoly pow(unsigned k) const;

    /// Canonical text in the expression grammar accepted by parse_polynomial;
    /// coefficients use 17 significant digits so that parsing it back is exact.
    std::string to_string() const;

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

private:
    std::size_t n_;
    std::map<Exponents, Complex> terms_;
};

MultiPoly operator+(MultiPoly a, const MultiPoly& b);
MultiPoly operator-(MultiPoly a, const MultiPoly& b);
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
MultiPoly operator*(Complex c, MultiPoly p);
MultiPoly operator-(MultiPoly p);

unsigned total_degree(const Exponents& e);

/// parts[k] holds exactly the terms of total degree k, for 0 <= k <= order.
std::vector<MultiPoly> homogeneous_parts(const MultiPoly& p, unsigned order);

/// Drops every term of total degree above `order`.
MultiPoly truncate(const MultiPoly& p, unsigned order);

/// Dense univariate polynomial, coefficients in ascending degree. Trailing
/// zero coefficients are trimmed, so a nonempty coefficient list always has a
/// nonzero leading entry. The zero polynomial has an empty list.
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Complex> coefficients);

    int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const noexcept { return coeffs_.empty(); }
    std::span<const Complex> coefficients() const noexcept { return coeffs_; }
    Complex operator[](std::size_t k) const { return k < coeffs_.size() ? coeffs_[k] : Complex{}; }

    Complex operator()(Complex z) const;
    /// Value and first derivative at z in one Horner pass.
    std::pair<Complex, Complex> value_and_derivative(Complex z) const;
    /// Sum of |a_k| |z|^k, the natural scale of rounding error in operator().
    double magnitude_bound(double abs_z) const;

    friend bool operator==(const UniPoly&, const UniPoly&) = default;

private:
    std::vector<Complex> coeffs_;
};

UniPoly operator*(const UniPoly& a, const UniPoly& b);

}  // namespace starfn
