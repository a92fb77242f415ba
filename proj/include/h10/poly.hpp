#pragma once

/**
 * @file poly.hpp
 * @brief Sparse multivariate integer polynomials: parsing, exact evaluation
 *        and an exhaustive root search over a box of non-negative integers.
 *
 * Coefficients and values are arbitrary-precision (boost::multiprecision),
 * so evaluation at any lattice point is exact.
 */

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace h10 {

using Integer = boost::multiprecision::cpp_int;
using Exponents = std::vector<std::uint32_t>;

/// A point of N^k. Coordinates are non-negative by construction.
using LatticePoint = std::vector<std::uint64_t>;

class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised for malformed polynomial text. `position` is a 0-based byte offset.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::runtime_error(what + " at position " + std::to_string(position)),
          position_(position) {}

    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

/**
 * Polynomial in k variables with integer coefficients, stored as a map from
 * exponent vector to nonzero coefficient. Zero coefficients are never stored,
 * so the zero polynomial has an empty term map.
 */
class Polynomial {
public:
    using TermMap = std::map<Exponents, Integer>;

    explicit Polynomial(std::size_t k) : k_(k) {
        if (k_ == 0) throw DimensionError("polynomial needs at least one variable");
    }

    Polynomial(std::size_t k, TermMap terms) : Polynomial(k) {
        for (auto& [exp, coef] : terms) add_term(exp, coef);
    }

    static Polynomial constant(std::size_t k, const Integer& c) {
        Polynomial p(k);
        p.add_term(Exponents(k, 0), c);
        return p;
    }

    static Polynomial variable(std::size_t k, std::size_t index) {
        if (index >= k) throw DimensionError("variable index out of range");
        Polynomial p(k);
        Exponents e(k, 0);
        e[index] = 1;
        p.add_term(e, 1);
        return p;
    }

    std::size_t num_vars() const noexcept { return k_; }
    const TermMap& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    std::uint32_t total_degree() const {
        std::uint32_t deg = 0;
        for (const auto& [exp, coef] : terms_) {
            std::uint32_t s = 0;
            for (auto e : exp) s += e;
            deg = std::max(deg, s);
        }
        return deg;
    }

    void add_term(const Exponents& exp, const Integer& coef) {
        if (exp.size() != k_) throw DimensionError("exponent vector length differs from k");
        if (coef == 0) return;
        auto [it, inserted] = terms_.try_emplace(exp, coef);
        if (!inserted) {
            it->second += coef;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Polynomial& operator+=(const Polynomial& rhs) {
        check_same_k(rhs);
        for (const auto& [exp, coef] : rhs.terms_) add_term(exp, coef);
        return *this;
    }

    Polynomial& operator-=(const Polynomial& rhs) {
        check_same_k(rhs);
        for (const auto& [exp, coef] : rhs.terms_) add_term(exp, -coef);
        return *this;
    }

    friend Polynomial operator+(Polynomial lhs, const Polynomial& rhs) { return lhs += rhs; }
    friend Polynomial operator-(Polynomial lhs, const Polynomial& rhs) { return lhs -= rhs; }

    friend Polynomial operator-(const Polynomial& p) {
        Polynomial r(p.k_);
        for (const auto& [exp, coef] : p.terms_) r.terms_.emplace(exp, -coef);
        return r;
    }

    friend Polynomial operator*(const Polynomial& lhs, const Polynomial& rhs) {
        lhs.check_same_k(rhs);
        Polynomial r(lhs.k_);
        Exponents e(lhs.k_);
        for (const auto& [ea, ca] : lhs.terms_) {
            for (const auto& [eb, cb] : rhs.terms_) {
                for (std::size_t i = 0; i < lhs.k_; ++i) e[i] = ea[i] + eb[i];
                r.add_term(e, ca * cb);
            }
        }
        return r;
    }

    Polynomial pow(std::uint32_t n) const {
        Polynomial result = constant(k_, 1);
        Polynomial base = *this;
        while (n > 0) {
            if (n & 1u) result = result * base;
            n >>= 1;
            if (n > 0) base = base * base;
        }
        return result;
    }

    /// Exact value at `pt`. Throws DimensionError if pt.size() != k.
    Integer evaluate(std::span<const std::uint64_t> pt) const {
        if (pt.size() != k_) throw DimensionError("point dimension differs from k");
        Integer value = 0;
        Integer mono;
        for (const auto& [exp, coef] : terms_) {
            mono = coef;
            for (std::size_t i = 0; i < k_ && mono != 0; ++i) {
                if (exp[i] == 0) continue;
                mono *= boost::multiprecision::pow(Integer(pt[i]), exp[i]);
            }
            value += mono;
        }
        return value;
    }

    friend bool operator==(const Polynomial&, const Polynomial&) = default;

private:
    void check_same_k(const Polynomial& other) const {
        if (other.k_ != k_) throw DimensionError("polynomials have different variable counts");
    }

    std::size_t k_;
    TermMap terms_;
};

inline Integer evaluate(const Polynomial& p, std::span<const std::uint64_t> pt) {
    return p.evaluate(pt);
}

/// A parsed equation: the canonical polynomial and its variable names in
/// order of first appearance (variable i of the polynomial is names[i]).
struct ParsedPolynomial {
    Polynomial poly;
    std::vector<std::string> names;
};

namespace detail {

enum class TokenKind { number, identifier, plus, minus, star, caret, lparen, rparen, equals, end };

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t pos;
};

inline std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < src.size()) {
        const char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            if (i < src.size() && (src[i] == '.' || src[i] == 'e' || src[i] == 'E')) {
                // 2e3 would otherwise read as 2*e*3; reject both forms outright.
                throw ParseError("non-integer literal", start);
            }
            out.push_back({TokenKind::number, std::string(src.substr(start, i - start)), start});
            continue;
        }
        if (c == '.') throw ParseError("non-integer literal", start);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            // A name is one letter optionally followed by digits: x, y, x1, x12.
            ++i;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
            out.push_back({TokenKind::identifier, std::string(src.substr(start, i - start)), start});
            continue;
        }
        TokenKind kind;
        switch (c) {
            case '+': kind = TokenKind::plus; break;
            case '-': kind = TokenKind::minus; break;
            case '*': kind = TokenKind::star; break;
            case '^': kind = TokenKind::caret; break;
            case '(': kind = TokenKind::lparen; break;
            case ')': kind = TokenKind::rparen; break;
            case '=': kind = TokenKind::equals; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", start);
        }
        out.push_back({kind, std::string(1, c), start});
        ++i;
    }
    out.push_back({TokenKind::end, {}, src.size()});
    return out;
}

class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<std::string> names)
        : tokens_(std::move(tokens)), names_(std::move(names)) {}

    Polynomial parse() {
        Polynomial p = expression();
        if (peek().kind == TokenKind::equals) {
            next();
            const Token& rhs = peek();
            if (rhs.kind != TokenKind::number || Integer(rhs.text) != 0) {
                throw ParseError("only '= 0' may follow the expression", rhs.pos);
            }
            next();
        }
        if (peek().kind != TokenKind::end) throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
        return p;
    }

private:
    const Token& peek() const { return tokens_[cur_]; }
    const Token& next() { return tokens_[cur_++]; }

    std::size_t k() const { return names_.size(); }

    Polynomial expression() {
        Polynomial acc = term();
        for (;;) {
            if (peek().kind == TokenKind::plus) {
                next();
                acc += term();
            } else if (peek().kind == TokenKind::minus) {
                next();
                acc -= term();
            } else {
                return acc;
            }
        }
    }

    static bool starts_factor(TokenKind kind) {
        return kind == TokenKind::number || kind == TokenKind::identifier || kind == TokenKind::lparen;
    }

    // Juxtaposition is multiplication: 2x, (x-1)(x-3), x y.
    Polynomial term() {
        Polynomial acc = unary();
        for (;;) {
            if (peek().kind == TokenKind::star) {
                next();
                acc = acc * unary();
            } else if (starts_factor(peek().kind)) {
                acc = acc * power();
            } else {
                return acc;
            }
        }
    }

    Polynomial unary() {
        if (peek().kind == TokenKind::minus) {
            next();
            return -unary();
        }
        if (peek().kind == TokenKind::plus) {
            next();
            return unary();
        }
        return power();
    }

    Polynomial power() {
        Polynomial base = primary();
        if (peek().kind != TokenKind::caret) return base;
        next();
        const Token& tok = peek();
        if (tok.kind == TokenKind::minus) throw ParseError("negative exponent", tok.pos);
        if (tok.kind != TokenKind::number) throw ParseError("exponent must be a non-negative integer literal", tok.pos);
        next();
        const Integer e(tok.text);
        if (e > 4096) throw ParseError("exponent too large", tok.pos);
        if (peek().kind == TokenKind::caret) throw ParseError("chained exponents are ambiguous; use parentheses", peek().pos);
        return base.pow(e.convert_to<std::uint32_t>());
    }

    Polynomial primary() {
        const Token& tok = peek();
        switch (tok.kind) {
            case TokenKind::number:
                next();
                return Polynomial::constant(k(), Integer(tok.text));
            case TokenKind::identifier: {
                next();
                for (std::size_t i = 0; i < names_.size(); ++i) {
                    if (names_[i] == tok.text) return Polynomial::variable(k(), i);
                }
                throw ParseError("unknown variable", tok.pos);  // unreachable after the name pass
            }
            case TokenKind::lparen: {
                next();
                Polynomial inner = expression();
                if (peek().kind != TokenKind::rparen) throw ParseError("expected ')'", peek().pos);
                next();
                return inner;
            }
            case TokenKind::end:
                throw ParseError("unexpected end of input", tok.pos);
            default:
                throw ParseError("unexpected token '" + tok.text + "'", tok.pos);
        }
    }

    std::vector<Token> tokens_;
    std::vector<std::string> names_;
    std::size_t cur_ = 0;
};

}  // namespace detail

/**
 * Parse an arithmetic expression over integer literals and variables into its
 * expanded canonical form. Operators: + - * ^ and parentheses; juxtaposition
 * multiplies. A trailing "= 0" is accepted. Variables are numbered by first
 * appearance in the text, and an expression without variables is rejected.
 */
inline ParsedPolynomial parse_polynomial_named(std::string_view text) {
    auto tokens = detail::tokenize(text);
    std::vector<std::string> names;
    for (const auto& t : tokens) {
        if (t.kind != detail::TokenKind::identifier) continue;
        if (std::find(names.begin(), names.end(), t.text) == names.end()) names.push_back(t.text);
    }
    if (names.empty()) throw ParseError("expression has no variables", 0);
    detail::Parser parser(std::move(tokens), names);
    Polynomial p = parser.parse();
    return {std::move(p), std::move(names)};
}

inline Polynomial parse_polynomial(std::string_view text) {
    return parse_polynomial_named(text).poly;
}

/**
 * Exhaustive scan of {0..bound}^k in lexicographic order; returns the first
 * root found, which is therefore the lexicographically smallest one.
 */
inline std::optional<LatticePoint> brute_force_search(const Polynomial& p, std::uint64_t bound) {
    const std::size_t k = p.num_vars();
    LatticePoint pt(k, 0);
    for (;;) {
        if (p.evaluate(pt) == 0) return pt;
        std::size_t i = k;
        while (i > 0) {
            --i;
            if (pt[i] < bound) {
                ++pt[i];
                break;
            }
            pt[i] = 0;
            if (i == 0) return std::nullopt;
        }
    }
}

}  // namespace h10
