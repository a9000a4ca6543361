#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gdifs {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse(). `offset` is a byte offset into the source string.
class ParseError : public Error {
public:
    ParseError(std::string message, std::size_t offset, std::vector<std::string> expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

/// Division by zero, 0^negative, or a fractional power of a negative base.
class DomainError : public Error {
public:
    DomainError(std::string message, double x);
    double x() const noexcept { return x_; }

private:
    double x_;
};

/// Immutable arithmetic expression in the single variable `x`.
///
/// Grammar (precedence high to low): `^` (right-assoc, constant exponent),
/// unary minus, `* /`, `+ -`. Literals are decimal numbers with an optional
/// exponent part; fractions are written with `/`.
class Expr {
public:
    struct Node;

    static Expr parse(std::string_view src);

    double operator()(double x) const { return eval(x); }
    double eval(double x) const;

    /// Fully parenthesised form with lossless literals; parse(to_string()) is
    /// bit-exactly equivalent.
    std::string to_string() const;

    const std::string& source() const noexcept { return source_; }

private:
    Expr(std::shared_ptr<const Node> root, std::string source);

    std::shared_ptr<const Node> root_;
    std::string source_;
};

inline Expr parse(std::string_view src) { return Expr::parse(src); }

struct SelfMapCheck {
    bool pass = false;
    double witness_x = 0.0;
    std::optional<double> witness_value;  // empty when evaluation failed
    double violation = 0.0;               // distance outside [lo, hi]
    std::string message;
};

/// Checks e([lo, hi]) ⊂ [lo, hi] on an equispaced grid including both ends,
/// with 1e-12 slack. The witness is the worst grid point.
SelfMapCheck check_self_map(const Expr& e, double lo, double hi, std::size_t n_samples);

}  // namespace gdifs
