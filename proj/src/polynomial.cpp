#include "starfn/polynomial.hpp"

#include "starfn/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace starfn {

namespace {

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
    return buf;
}

}  // namespace

unsigned total_degree(const Exponents& e) {
    return std::accumulate(e.begin(), e.end(), 0u);
}

MultiPoly::MultiPoly(std::size_t n) : n_(n) {}

MultiPoly MultiPoly::constant(std::size_t n, Complex c) {
    MultiPoly p(n);
    p.add_term(Exponents(n, 0), c);
    return p;
}

MultiPoly MultiPoly::variable(std::size_t n, std::size_t index) {
    if (index >= n) throw DomainError("variable index out of range");
    MultiPoly p(n);
    Exponents e(n, 0);
    e[index] = 1;
    p.add_term(e, 1.0);
    return p;
}

unsigned MultiPoly::degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, total_degree(e));
    return d;
}

Complex MultiPoly::coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Complex{} : it->second;
}

Complex MultiPoly::constant_term() const { return coefficient(Exponents(n_, 0)); }

double MultiPoly::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

void MultiPoly::add_term(const Exponents& e, Complex c) {
    if (e.size() != n_) throw DomainError("exponent tuple length does not match variable count");
    if (c == Complex{}) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second == Complex{}) terms_.erase(it);
    }
}

Complex MultiPoly::evaluate(std::span<const Complex> z) const {
    if (z.size() != n_) throw DomainError("point dimension does not match variable count");
    Complex sum{};
    for (const auto& [e, c] : terms_) {
        Complex term = c;
        for (std::size_t j = 0; j < n_; ++j)
            for (unsigned k = 0; k < e[j]; ++k) term *= z[j];
        sum += term;
    }
    return sum;
}

MultiPoly& MultiPoly::operator+=(const MultiPoly& other) {
    if (other.n_ != n_) throw DomainError("variable count mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, c);
    return *this;
}

MultiPoly& MultiPoly::operator-=(const MultiPoly& other) {
    if (other.n_ != n_) throw DomainError("variable count mismatch");
    for (const auto& [e, c] : other.terms_) add_term(e, -c);
    return *this;
}

MultiPoly& MultiPoly::operator*=(const MultiPoly& other) {
    if (other.n_ != n_) throw DomainError("variable count mismatch");
    MultiPoly out(n_);
    Exponents e(n_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : other.terms_) {
            for (std::size_t j = 0; j < n_; ++j) e[j] = ea[j] + eb[j];
            out.add_term(e, ca * cb);
        }
    terms_ = std::move(out.terms_);
    return *this;
}

MultiPoly& MultiPoly::operator*=(Complex c) {
    if (c == Complex{}) {
        terms_.clear();
        return *this;
    }
    for (auto it = terms_.begin(); it != terms_.end();) {
        it->second *= c;
        if (it->second == Complex{})
            it = terms_.erase(it);
        else
            ++it;
    }
    return *this;
}

MultiPoly MultiPoly::pow(unsigned k) const {
    MultiPoly result = constant(n_, 1.0);
    for (unsigned i = 0; i < k; ++i) result *= *this;
    return result;
}

std::string MultiPoly::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [e, c] : terms_) {
        if (!out.empty()) out += " + ";
        if (c.imag() == 0.0)
            out += format_real(c.real());
        else
            out += "(" + format_real(c.real()) + " + " + format_real(c.imag()) + "*i)";
        for (std::size_t j = 0; j < n_; ++j) {
            if (e[j] == 0) continue;
            out += "*z" + std::to_string(j + 1);
            if (e[j] > 1) out += "^" + std::to_string(e[j]);
        }
    }
    return out;
}

MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly out = a;
    return out *= b;
}
MultiPoly operator*(Complex c, MultiPoly p) { return p *= c; }
MultiPoly operator-(MultiPoly p) { return p *= -1.0; }

std::vector<MultiPoly> homogeneous_parts(const MultiPoly& p, unsigned order) {
    std::vector<MultiPoly> parts(order + 1, MultiPoly(p.dimension()));
    for (const auto& [e, c] : p.terms()) {
        unsigned d = total_degree(e);
        if (d <= order) parts[d].add_term(e, c);
    }
    return parts;
}

MultiPoly truncate(const MultiPoly& p, unsigned order) {
    MultiPoly out(p.dimension());
    for (const auto& [e, c] : p.terms())
        if (total_degree(e) <= order) out.add_term(e, c);
    return out;
}

UniPoly::UniPoly(std::vector<Complex> coefficients) : coeffs_(std::move(coefficients)) {
    while (!coeffs_.empty() && coeffs_.back() == Complex{}) coeffs_.pop_back();
}

Complex UniPoly::operator()(Complex z) const {
    Complex acc{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

std::pair<Complex, Complex> UniPoly::value_and_derivative(Complex z) const {
    Complex p{}, dp{};
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) {
        dp = dp * z + p;
        p = p * z + *it;
    }
    return {p, dp};
}

double UniPoly::magnitude_bound(double abs_z) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * abs_z + std::abs(*it);
    return acc;
}

UniPoly operator*(const UniPoly& a, const UniPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Complex> out(a.coefficients().size() + b.coefficients().size() - 1);
    for (std::size_t i = 0; i < a.coefficients().size(); ++i)
        for (std::size_t j = 0; j < b.coefficients().size(); ++j)
            out[i + j] += a.coefficients()[i] * b.coefficients()[j];
    return UniPoly(std::move(out));
}

}  // namespace starfn
