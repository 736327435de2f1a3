#pragma once

#include "starfn/polynomial.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace starfn {

/// Rational function F = G/H on C^n, normalized so that G(0) = H(0) = 1.
class MeroFunction {
public:
    /// Rescales both polynomials by their constant terms. Throws DomainError
    /// when either constant term vanishes or the variable counts differ.
    MeroFunction(MultiPoly numerator, MultiPoly denominator);

    static MeroFunction one(std::size_t n);

    std::size_t dimension() const noexcept { return numerator_.dimension(); }
    const MultiPoly& numerator() const noexcept { return numerator_; }
    const MultiPoly& denominator() const noexcept { return denominator_; }

    /// F(Z) as a complex number; infinite when H(Z) = 0 and G(Z) != 0.
    Complex evaluate(std::span<const Complex> z) const;

    /// "(G)/(H)", parseable by parse_function.
    std::string to_string() const;

    friend bool operator==(const MeroFunction&, const MeroFunction&) = default;

private:
    MultiPoly numerator_;
    MultiPoly denominator_;
};

/// Parses one polynomial expression over z1..zn:
///
///     expr   := term { ("+"|"-") term }
///     term   := factor { "*" factor }
///     factor := base [ "^" uint ]
///     base   := "(" expr ")" | "z" uint | number | "i" | "-" base
///
/// Numbers are decimal literals with an optional exponent suffix. Note that
/// unary minus is part of `base`, so "-z1^2" means (-z1)^2.
MultiPoly parse_polynomial(std::string_view text, std::size_t n);

/// Parses "expr" or "expr / expr" and normalizes the result.
MeroFunction parse_function(std::string_view text, std::size_t n);

/// Reads {"n": int, "numerator": "...", "denominator": "..."}; the
/// denominator defaults to "1".
MeroFunction load_function_json(const std::filesystem::path& path);
MeroFunction function_from_json_text(std::string_view json_text);
std::string function_to_json_text(const MeroFunction& f);

/// (F o U)(Z) = F(U Z) for a square matrix U given row-major.
MultiPoly compose_linear(const MultiPoly& p, std::span<const Complex> matrix);
MeroFunction compose_linear(const MeroFunction& f, std::span<const Complex> matrix);

}  // namespace starfn
