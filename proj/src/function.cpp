#include "starfn/function.hpp"

#include "starfn/error.hpp"

#include <json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace starfn {

namespace {

class ExpressionParser {
public:
    ExpressionParser(std::string_view text, std::size_t n) : text_(text), n_(n) {}

    MultiPoly parse_expr() {
        MultiPoly acc = parse_term();
        for (;;) {
            skip_space();
            if (accept('+'))
                acc += parse_term();
            else if (accept('-'))
                acc -= parse_term();
            else
                return acc;
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool accept(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    std::size_t position() const { return pos_; }

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

private:
    MultiPoly parse_term() {
        MultiPoly acc = parse_factor();
        while (accept('*')) acc *= parse_factor();
        return acc;
    }

    MultiPoly parse_factor() {
        MultiPoly b = parse_base();
        if (accept('^')) {
            skip_space();
            unsigned k = parse_uint("exponent");
            return b.pow(k);
        }
        return b;
    }

    MultiPoly parse_base() {
        skip_space();
        if (pos_ >= text_.size()) fail("unexpected end of expression");
        char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            MultiPoly inner = parse_expr();
            if (!accept(')')) fail("expected ')'");
            return inner;
        }
        if (c == '-') {
            ++pos_;
            return -parse_base();
        }
        if (c == 'z') {
            std::size_t start = pos_;
            ++pos_;
            unsigned idx = parse_uint("variable index");
            if (idx == 0 || idx > n_) {
                pos_ = start;
                fail("variable z" + std::to_string(idx) + " outside z1..z" + std::to_string(n_));
            }
            return MultiPoly::variable(n_, idx - 1);
        }
        if (c == 'i') {
            ++pos_;
            return MultiPoly::constant(n_, Complex(0.0, 1.0));
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return MultiPoly::constant(n_, parse_number());
        fail(std::string("unexpected character '") + c + "'");
    }

    unsigned parse_uint(const char* what) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail(std::string("expected ") + what);
        unsigned v = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc{}) {
            pos_ = start;
            fail(std::string(what) + " out of range");
        }
        return v;
    }

    double parse_number() {
        std::size_t start = pos_;
        auto digits = [&] {
            std::size_t s = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            return pos_ - s;
        };
        std::size_t count = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            count += digits();
        }
        if (count == 0) fail("malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (digits() == 0) {
                pos_ = save;
                fail("malformed exponent");
            }
        }
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
        if (ec != std::errc{} || ptr != text_.data() + pos_) {
            pos_ = start;
            fail("malformed number");
        }
        return v;
    }

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    std::string_view text_;
    std::size_t n_;
    std::size_t pos_ = 0;
};

MultiPoly normalized(MultiPoly p, const char* which) {
    Complex c0 = p.constant_term();
    if (c0 == Complex{}) throw DomainError(std::string(which) + " vanishes at the origin; F(0) = 1 cannot hold");
    p *= 1.0 / c0;
    // Exact 1 even when 1/c0 * c0 rounds.
    Exponents zero(p.dimension(), 0);
    p.add_term(zero, 1.0 - p.constant_term());
    return p;
}

}  // namespace

MeroFunction::MeroFunction(MultiPoly numerator, MultiPoly denominator)
    : numerator_(normalized(std::move(numerator), "numerator")),
      denominator_(normalized(std::move(denominator), "denominator")) {
    if (numerator_.dimension() != denominator_.dimension())
        throw DomainError("numerator and denominator have different variable counts");
    if (numerator_.dimension() == 0) throw DomainError("variable count must be positive");
}

MeroFunction MeroFunction::one(std::size_t n) {
    return MeroFunction(MultiPoly::constant(n, 1.0), MultiPoly::constant(n, 1.0));
}

Complex MeroFunction::evaluate(std::span<const Complex> z) const {
    return numerator_.evaluate(z) / denominator_.evaluate(z);
}

std::string MeroFunction::to_string() const {
    return "(" + numerator_.to_string() + ")/(" + denominator_.to_string() + ")";
}

MultiPoly parse_polynomial(std::string_view text, std::size_t n) {
    if (n == 0) throw DomainError("variable count must be positive");
    ExpressionParser parser(text, n);
    MultiPoly p = parser.parse_expr();
    if (!parser.at_end()) parser.fail("trailing input");
    return p;
}

MeroFunction parse_function(std::string_view text, std::size_t n) {
    if (n == 0) throw DomainError("variable count must be positive");
    ExpressionParser parser(text, n);
    MultiPoly num = parser.parse_expr();
    MultiPoly den = MultiPoly::constant(n, 1.0);
    if (parser.accept('/')) den = parser.parse_expr();
    if (!parser.at_end()) parser.fail("trailing input");
    return MeroFunction(std::move(num), std::move(den));
}

MeroFunction function_from_json_text(std::string_view json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte == 0 ? 0 : e.byte - 1);
    }
    if (!j.is_object() || !j.contains("n") || !j.contains("numerator"))
        throw ParseError("function definition needs \"n\" and \"numerator\"", 0);
    if (!j["n"].is_number_integer() || j["n"].get<long long>() <= 0)
        throw ParseError("\"n\" must be a positive integer", 0);
    auto n = static_cast<std::size_t>(j["n"].get<long long>());
    if (!j["numerator"].is_string()) throw ParseError("\"numerator\" must be a string", 0);
    std::string den = "1";
    if (j.contains("denominator")) {
        if (!j["denominator"].is_string()) throw ParseError("\"denominator\" must be a string", 0);
        den = j["denominator"].get<std::string>();
    }
    return MeroFunction(parse_polynomial(j["numerator"].get<std::string>(), n), parse_polynomial(den, n));
}

MeroFunction load_function_json(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return function_from_json_text(ss.str());
}

std::string function_to_json_text(const MeroFunction& f) {
    nlohmann::json j;
    j["n"] = f.dimension();
    j["numerator"] = f.numerator().to_string();
    j["denominator"] = f.denominator().to_string();
    return j.dump(2);
}

MultiPoly compose_linear(const MultiPoly& p, std::span<const Complex> matrix) {
    const std::size_t n = p.dimension();
    if (matrix.size() != n * n) throw DomainError("matrix size does not match variable count");
    std::vector<MultiPoly> images;
    images.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        MultiPoly row(n);
        for (std::size_t j = 0; j < n; ++j) row += matrix[i * n + j] * MultiPoly::variable(n, j);
        images.push_back(std::move(row));
    }
    MultiPoly out(n);
    for (const auto& [e, c] : p.terms()) {
        MultiPoly term = MultiPoly::constant(n, c);
        for (std::size_t i = 0; i < n; ++i)
            if (e[i] > 0) term *= images[i].pow(e[i]);
        out += term;
    }
    return out;
}

MeroFunction compose_linear(const MeroFunction& f, std::span<const Complex> matrix) {
    return MeroFunction(compose_linear(f.numerator(), matrix), compose_linear(f.denominator(), matrix));
}

}  // namespace starfn
