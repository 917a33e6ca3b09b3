#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "stcalc/error.hpp"
#include "stcalc/power_series.hpp"
#include "stcalc/scalar.hpp"

namespace stcalc {

/// Right-hand-side variables: x, y(x) and y(ux).
enum class Var { X, Y, YU };

struct ExprNode;

/// Immutable expression tree; copies share structure.
class Expr {
public:
    static Expr number(Rational value, bool exact, std::string text);
    static Expr integer(long value);
    static Expr variable(Var v);
    static Expr binary(char op, Expr lhs, Expr rhs);
    static Expr negate(Expr operand);
    static Expr power(Expr base, unsigned exponent);

    const ExprNode& node() const noexcept { return *node_; }

    friend bool operator==(const Expr& a, const Expr& b);

private:
    explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const ExprNode> node_;
};

struct NumberNode {
    Rational value;
    bool exact;
    std::string text;
};
struct VariableNode {
    Var var;
};
struct BinaryNode {
    char op;  // + - * /
    Expr lhs;
    Expr rhs;
};
struct NegateNode {
    Expr operand;
};
struct PowerNode {
    Expr base;
    unsigned exponent;
};

struct ExprNode {
    std::variant<NumberNode, VariableNode, BinaryNode, NegateNode, PowerNode> v;
};

/// expr := term (('+'|'-') term)*; term := factor (('*'|'/') factor)*;
/// factor := atom ('^' uint)?; atom := number | x | y | yu | '(' expr ')' | '-' atom
Expr parse_expr(std::string_view text);

/// Fully parenthesized text that parses back to the same tree.
std::string print(const Expr& e);

bool uses(const Expr& e, Var v);

/// False when any literal is a decimal, which forces float mode.
bool all_literals_exact(const Expr& e);

template <class V>
struct Bindings {
    V x;
    V y;
    V yu;
};

namespace detail {

template <class V>
V power_of(const V& base, unsigned e) {
    V result = base;
    if (e == 0) {
        if constexpr (std::is_same_v<V, double> || std::is_same_v<V, Rational>) {
            return V(1);
        } else {
            return V(base.order(), 1);
        }
    }
    for (unsigned i = 1; i < e; ++i) result = result * base;
    return result;
}

template <class V>
void check_divisor(const V& d) {
    if constexpr (std::is_same_v<V, double> || std::is_same_v<V, Rational>) {
        if (d == 0) throw Error(ErrorCode::DomainError, "cli", "division by zero in expression");
    }
}

}  // namespace detail

/// Evaluates over any field-like type V; `literal` maps a NumberNode to V.
template <class V, class LiteralFn>
V evaluate(const Expr& e, const Bindings<V>& b, const LiteralFn& literal) {
    return std::visit(
        [&](const auto& n) -> V {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, NumberNode>) {
                return literal(n);
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                switch (n.var) {
                    case Var::X: return b.x;
                    case Var::Y: return b.y;
                    case Var::YU: return b.yu;
                }
                return b.x;
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                V l = evaluate(n.lhs, b, literal);
                V r = evaluate(n.rhs, b, literal);
                switch (n.op) {
                    case '+': return l + r;
                    case '-': return l - r;
                    case '*': return l * r;
                    default: detail::check_divisor(r); return l / r;
                }
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                return -evaluate(n.operand, b, literal);
            } else {
                return detail::power_of(evaluate(n.base, b, literal), n.exponent);
            }
        },
        e.node().v);
}

double evaluate(const Expr& e, double x, double y, double yu);
Rational evaluate(const Expr& e, const Rational& x, const Rational& y, const Rational& yu);

/// Evaluates with power series bound to the variables; literals become constants.
template <Scalar T>
PowerSeries<T> evaluate_series(const Expr& e, const Bindings<PowerSeries<T>>& b) {
    const int order = b.x.order();
    return evaluate(e, b, [order](const NumberNode& n) { return PowerSeries<T>(order, from_rational<T>(n.value)); });
}

/// Exponents of (x, y, yu) -> coefficient.
using Polynomial = std::map<std::array<unsigned, 3>, Rational>;

/// Polynomial form when divisions are by nonzero constants only.
std::optional<Polynomial> to_polynomial(const Expr& e);

}  // namespace stcalc
