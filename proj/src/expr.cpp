#include "stcalc/expr.hpp"

#include <cctype>

namespace stcalc {

Expr Expr::number(Rational value, bool exact, std::string text) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{NumberNode{std::move(value), exact, std::move(text)}}));
}

Expr Expr::integer(long value) {
    if (value < 0) return negate(integer(-value));
    return number(Rational(value), true, std::to_string(value));
}

Expr Expr::variable(Var v) { return Expr(std::make_shared<const ExprNode>(ExprNode{VariableNode{v}})); }

Expr Expr::binary(char op, Expr lhs, Expr rhs) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{BinaryNode{op, std::move(lhs), std::move(rhs)}}));
}

Expr Expr::negate(Expr operand) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{NegateNode{std::move(operand)}}));
}

Expr Expr::power(Expr base, unsigned exponent) {
    return Expr(std::make_shared<const ExprNode>(ExprNode{PowerNode{std::move(base), exponent}}));
}

bool operator==(const Expr& a, const Expr& b) {
    const auto& va = a.node().v;
    const auto& vb = b.node().v;
    if (va.index() != vb.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using N = std::decay_t<decltype(x)>;
            const N& y = std::get<N>(vb);
            if constexpr (std::is_same_v<N, NumberNode>) {
                return x.value == y.value && x.exact == y.exact;
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                return x.var == y.var;
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                return x.op == y.op && x.lhs == y.lhs && x.rhs == y.rhs;
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                return x.operand == y.operand;
            } else {
                return x.exponent == y.exponent && x.base == y.base;
            }
        },
        va);
}

namespace {

const std::vector<std::string> kAtomStart = {"number", "'x'", "'y'", "'yu'", "'('", "'-'"};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    Expr parse() {
        Expr e = expr();
        skip_space();
        if (pos_ != text_.size()) {
            fail({"'+'", "'-'", "'*'", "'/'", "'^'", "end of input"});
        }
        return e;
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        skip_space();
        std::string_view found;
        if (pos_ < text_.size()) found = text_.substr(pos_, 1);
        throw SyntaxError(pos_, std::move(expected), found);
    }

    Expr expr() {
        Expr lhs = term();
        for (char c = peek(); c == '+' || c == '-'; c = peek()) {
            ++pos_;
            lhs = Expr::binary(c, lhs, term());
        }
        return lhs;
    }

    Expr term() {
        Expr lhs = factor();
        for (char c = peek(); c == '*' || c == '/'; c = peek()) {
            ++pos_;
            lhs = Expr::binary(c, lhs, factor());
        }
        return lhs;
    }

    Expr factor() {
        Expr base = atom();
        if (peek() != '^') return base;
        ++pos_;
        skip_space();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_ || pos_ - start > 6) {
            pos_ = start;
            fail({"unsigned integer exponent"});
        }
        return Expr::power(base, static_cast<unsigned>(std::stoul(std::string(text_.substr(start, pos_ - start)))));
    }

    Expr atom() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr inner = expr();
            if (peek() != ')') fail({"'+'", "'-'", "'*'", "'/'", "'^'", "')'"});
            ++pos_;
            return inner;
        }
        if (c == '-') {
            ++pos_;
            return Expr::negate(atom());
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string_view id = text_.substr(start, pos_ - start);
            if (id == "x") return Expr::variable(Var::X);
            if (id == "y") return Expr::variable(Var::Y);
            if (id == "yu") return Expr::variable(Var::YU);
            pos_ = start;
            fail(kAtomStart);
        }
        fail(kAtomStart);
    }

    Expr number() {
        const std::size_t start = pos_;
        const auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        };
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            std::size_t save = pos_++;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            const std::size_t exp_start = pos_;
            digits();
            if (exp_start == pos_) pos_ = save;
        }
        const std::string text(text_.substr(start, pos_ - start));
        Literal lit;
        try {
            lit = parse_literal(text);
        } catch (const Error&) {
            pos_ = start;
            fail({"number"});
        }
        return Expr::number(lit.value, lit.exact, text);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::string print(const Expr& e) {
    return std::visit(
        [](const auto& n) -> std::string {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, NumberNode>) {
                if (!n.exact && !n.text.empty()) return n.text;
                if (boost::multiprecision::denominator(n.value) == 1 && n.value >= 0) return to_string(n.value);
                return "(" + to_string(n.value) + ")";
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                switch (n.var) {
                    case Var::X: return "x";
                    case Var::Y: return "y";
                    case Var::YU: return "yu";
                }
                return "?";
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                return "(" + print(n.lhs) + " " + n.op + " " + print(n.rhs) + ")";
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                return "-(" + print(n.operand) + ")";
            } else {
                return "(" + print(n.base) + ")^" + std::to_string(n.exponent);
            }
        },
        e.node().v);
}

bool uses(const Expr& e, Var v) {
    return std::visit(
        [v](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, NumberNode>) {
                return false;
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                return n.var == v;
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                return uses(n.lhs, v) || uses(n.rhs, v);
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                return uses(n.operand, v);
            } else {
                return uses(n.base, v);
            }
        },
        e.node().v);
}

bool all_literals_exact(const Expr& e) {
    return std::visit(
        [](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, NumberNode>) {
                return n.exact;
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                return true;
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                return all_literals_exact(n.lhs) && all_literals_exact(n.rhs);
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                return all_literals_exact(n.operand);
            } else {
                return all_literals_exact(n.base);
            }
        },
        e.node().v);
}

double evaluate(const Expr& e, double x, double y, double yu) {
    return evaluate(e, Bindings<double>{x, y, yu}, [](const NumberNode& n) { return to_double(n.value); });
}

Rational evaluate(const Expr& e, const Rational& x, const Rational& y, const Rational& yu) {
    return evaluate(e, Bindings<Rational>{x, y, yu}, [](const NumberNode& n) { return n.value; });
}

namespace {

Polynomial poly_mul(const Polynomial& a, const Polynomial& b) {
    Polynomial r;
    for (const auto& [ea, ca] : a) {
        for (const auto& [eb, cb] : b) {
            const std::array<unsigned, 3> e{ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]};
            r[e] += ca * cb;
        }
    }
    std::erase_if(r, [](const auto& kv) { return kv.second == 0; });
    return r;
}

Polynomial poly_add(Polynomial a, const Polynomial& b, int sgn) {
    for (const auto& [e, c] : b) a[e] += sgn * c;
    std::erase_if(a, [](const auto& kv) { return kv.second == 0; });
    return a;
}

}  // namespace

std::optional<Polynomial> to_polynomial(const Expr& e) {
    return std::visit(
        [](const auto& n) -> std::optional<Polynomial> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, NumberNode>) {
                Polynomial p;
                if (n.value != 0) p[{0, 0, 0}] = n.value;
                return p;
            } else if constexpr (std::is_same_v<N, VariableNode>) {
                std::array<unsigned, 3> ex{0, 0, 0};
                ex[static_cast<std::size_t>(n.var)] = 1;
                return Polynomial{{ex, Rational(1)}};
            } else if constexpr (std::is_same_v<N, BinaryNode>) {
                auto l = to_polynomial(n.lhs);
                auto r = to_polynomial(n.rhs);
                if (!l || !r) return std::nullopt;
                switch (n.op) {
                    case '+': return poly_add(*l, *r, 1);
                    case '-': return poly_add(*l, *r, -1);
                    case '*': return poly_mul(*l, *r);
                    default: {
                        if (r->size() != 1 || r->begin()->first != std::array<unsigned, 3>{0, 0, 0}) {
                            return std::nullopt;
                        }
                        const Rational d = r->begin()->second;
                        for (auto& [ex, c] : *l) c /= d;
                        return l;
                    }
                }
            } else if constexpr (std::is_same_v<N, NegateNode>) {
                auto inner = to_polynomial(n.operand);
                if (!inner) return std::nullopt;
                for (auto& [ex, c] : *inner) c = -c;
                return inner;
            } else {
                auto base = to_polynomial(n.base);
                if (!base) return std::nullopt;
                Polynomial acc{{{0, 0, 0}, Rational(1)}};
                for (unsigned i = 0; i < n.exponent; ++i) acc = poly_mul(acc, *base);
                return acc;
            }
        },
        e.node().v);
}

}  // namespace stcalc
