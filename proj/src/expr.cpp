#include "gdifs/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <variant>

namespace gdifs {

ParseError::ParseError(std::string message, std::size_t offset, std::vector<std::string> expected)
    : Error(std::move(message)), offset_(offset), expected_(std::move(expected)) {}

DomainError::DomainError(std::string message, double x) : Error(std::move(message)), x_(x) {}

struct Expr::Node {
    struct Number { double value; };
    struct Var {};
    struct Neg { std::shared_ptr<const Node> arg; };
    struct Binary {
        char op;
        std::shared_ptr<const Node> lhs, rhs;
    };
    struct Pow {
        std::shared_ptr<const Node> base;
        double exponent;
        std::shared_ptr<const Node> exponent_expr;  // kept for printing
    };

    std::variant<Number, Var, Neg, Binary, Pow> v;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

template <class T>
NodePtr make(T t) {
    return std::make_shared<const Expr::Node>(Expr::Node{std::move(t)});
}

bool depends_on_x(const Expr::Node& n) {
    return std::visit(
        [](const auto& v) -> bool {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Expr::Node::Var>) return true;
            else if constexpr (std::is_same_v<T, Expr::Node::Number>) return false;
            else if constexpr (std::is_same_v<T, Expr::Node::Neg>) return depends_on_x(*v.arg);
            else if constexpr (std::is_same_v<T, Expr::Node::Binary>)
                return depends_on_x(*v.lhs) || depends_on_x(*v.rhs);
            else return depends_on_x(*v.base);
        },
        n.v);
}

double power(double base, double exponent, double x) {
    if (base == 0.0 && exponent < 0.0) throw DomainError("0 raised to a negative power", x);
    if (base < 0.0 && std::nearbyint(exponent) != exponent)
        throw DomainError("fractional power of a negative number", x);
    return std::pow(base, exponent);
}

double eval_node(const Expr::Node& n, double x) {
    return std::visit(
        [x](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                return v.value;
            } else if constexpr (std::is_same_v<T, Expr::Node::Var>) {
                return x;
            } else if constexpr (std::is_same_v<T, Expr::Node::Neg>) {
                return -eval_node(*v.arg, x);
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                const double a = eval_node(*v.lhs, x);
                const double b = eval_node(*v.rhs, x);
                switch (v.op) {
                    case '+': return a + b;
                    case '-': return a - b;
                    case '*': return a * b;
                    default:
                        if (b == 0.0) throw DomainError("division by zero", x);
                        return a / b;
                }
            } else {
                return power(eval_node(*v.base, x), v.exponent, x);
            }
        },
        n.v);
}

std::string format_literal(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void print_node(const Expr::Node& n, std::string& out) {
    std::visit(
        [&out](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Expr::Node::Number>) {
                out += format_literal(v.value);
            } else if constexpr (std::is_same_v<T, Expr::Node::Var>) {
                out += 'x';
            } else if constexpr (std::is_same_v<T, Expr::Node::Neg>) {
                out += "(-";
                print_node(*v.arg, out);
                out += ')';
            } else if constexpr (std::is_same_v<T, Expr::Node::Binary>) {
                out += '(';
                print_node(*v.lhs, out);
                out += v.op;
                print_node(*v.rhs, out);
                out += ')';
            } else {
                out += '(';
                print_node(*v.base, out);
                out += '^';
                print_node(*v.exponent_expr, out);
                out += ')';
            }
        },
        n.v);
}

// expr    := term (('+' | '-') term)*
// term    := unary (('*' | '/') unary)*
// unary   := '-' unary | power
// power   := primary ('^' unary)?
// primary := number | 'x' | '(' expr ')'
class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse_all() {
        if (src_.empty()) throw ParseError("empty expression", 0, {"number", "x", "(", "-"});
        for (std::size_t i = 0; i < src_.size(); ++i)
            if (static_cast<unsigned char>(src_[i]) >= 0x80) throw ParseError("non-ASCII character", i, {});
        NodePtr e = expr();
        skip_ws();
        if (pos_ != src_.size())
            throw ParseError(std::string("unexpected '") + src_[pos_] + "'", pos_, {"+", "-", "*", "/", "^", "end of input"});
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < src_.size() ? src_[pos_] : '\0';
    }

    NodePtr expr() {
        NodePtr lhs = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            lhs = make(Expr::Node::Binary{c, lhs, term()});
        }
        return lhs;
    }

    NodePtr term() {
        NodePtr lhs = unary();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            lhs = make(Expr::Node::Binary{c, lhs, unary()});
        }
        return lhs;
    }

    NodePtr unary() {
        if (peek() == '-') {
            ++pos_;
            return make(Expr::Node::Neg{unary()});
        }
        return pow_expr();
    }

    NodePtr pow_expr() {
        NodePtr base = primary();
        if (peek() != '^') return base;
        ++pos_;
        const std::size_t exp_at = pos_;
        NodePtr exponent = unary();
        if (depends_on_x(*exponent))
            throw ParseError("exponent must be a constant", exp_at, {"number", "("});
        double value = 0.0;
        try {
            value = eval_node(*exponent, 0.0);
        } catch (const DomainError& e) {
            throw ParseError(std::string("exponent: ") + e.what(), exp_at, {"number"});
        }
        if (!std::isfinite(value)) throw ParseError("exponent is not finite", exp_at, {"number"});
        return make(Expr::Node::Pow{base, value, exponent});
    }

    NodePtr primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            NodePtr inner = expr();
            if (peek() != ')') throw ParseError("expected ')'", pos_, {")"});
            ++pos_;
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            const std::size_t start = pos_;
            while (pos_ < src_.size() &&
                   (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            const std::string_view ident = src_.substr(start, pos_ - start);
            if (ident != "x")
                throw ParseError("unknown identifier '" + std::string(ident) + "'", start, {"x"});
            return make(Expr::Node::Var{});
        }
        if (c == '\0') throw ParseError("unexpected end of input", pos_, {"number", "x", "(", "-"});
        throw ParseError(std::string("unexpected '") + c + "'", pos_, {"number", "x", "(", "-"});
    }

    NodePtr number() {
        const std::size_t start = pos_;
        auto digits = [&] {
            std::size_t n = 0;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_, ++n;
            return n;
        };
        std::size_t n = digits();
        if (pos_ < src_.size() && src_[pos_] == '.') {
            ++pos_;
            n += digits();
        }
        if (n == 0) throw ParseError("malformed number", start, {"digit"});
        if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
            const std::size_t save = pos_;
            ++pos_;
            if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
            if (digits() == 0) pos_ = save;  // leave 'e' for the identifier check
        }
        const std::string text(src_.substr(start, pos_ - start));
        return make(Expr::Node::Number{std::strtod(text.c_str(), nullptr)});
    }

    std::string_view src_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr::Expr(std::shared_ptr<const Node> root, std::string source)
    : root_(std::move(root)), source_(std::move(source)) {}

Expr Expr::parse(std::string_view src) {
    Parser p(src);
    return Expr(p.parse_all(), std::string(src));
}

double Expr::eval(double x) const { return eval_node(*root_, x); }

std::string Expr::to_string() const {
    std::string out;
    print_node(*root_, out);
    return out;
}

SelfMapCheck check_self_map(const Expr& e, double lo, double hi, std::size_t n_samples) {
    if (!(lo < hi)) throw Error("check_self_map: lo must be < hi");
    if (n_samples < 2) throw Error("check_self_map: need at least 2 samples");
    constexpr double slack = 1e-12;

    SelfMapCheck out;
    out.pass = true;
    out.violation = -1.0;
    for (std::size_t k = 0; k < n_samples; ++k) {
        const double x = k + 1 == n_samples ? hi : lo + (hi - lo) * double(k) / double(n_samples - 1);
        double y;
        try {
            y = e(x);
        } catch (const DomainError& err) {
            out.pass = false;
            out.witness_x = x;
            out.witness_value.reset();
            out.violation = INFINITY;
            out.message = err.what();
            return out;
        }
        double violation = 0.0;
        if (!std::isfinite(y)) violation = INFINITY;
        else if (y < lo) violation = lo - y;
        else if (y > hi) violation = y - hi;
        if (violation > out.violation) {
            out.violation = violation;
            out.witness_x = x;
            out.witness_value = y;
        }
    }
    if (out.violation > slack) {
        out.pass = false;
        char buf[160];
        std::snprintf(buf, sizeof buf, "f(%.17g) = %.17g leaves [%g, %g]", out.witness_x,
                      *out.witness_value, lo, hi);
        out.message = buf;
    }
    return out;
}

}  // namespace gdifs
