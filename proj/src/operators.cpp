#include "stcalc/operators.hpp"

#include <cmath>

namespace stcalc {

double numeric_derivative(const RealFn& f, double x) {
    const auto central = [&](double h) { return (f(x + h) - f(x - h)) / (2 * h); };
    const double d1 = central(1e-4);
    const double d2 = central(1e-5);
    const double d3 = central(1e-6);
    // Central differences err as h^2, so each tenfold step cancels with weight 1/99.
    const double r12 = d2 + (d2 - d1) / 99.0;
    const double r23 = d3 + (d3 - d2) / 99.0;
    return r23 + (r23 - r12) / 9999.0;
}

double st_derivative(const RealFn& f, const StParams<double>& p, double u, double x) {
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "operators", "u must be positive");
    if (x == 0) return numeric_derivative(f, 0.0);
    if (p.degenerate_q()) return numeric_derivative(f, u * p.phi() * x);
    const double up = u * p.phi();
    const double upp = u * p.phi_prime();
    return (f(up * x) - f(upp * x)) / ((up - upp) * x);
}

double fibonacci_derivative(const RealFn& f, double u, double x) {
    return st_derivative(f, make_params(1.0, 1.0), u, x);
}

double pell_derivative(const RealFn& f, double u, double x) {
    return st_derivative(f, make_params(2.0, 1.0), u, x);
}

double jacobsthal_derivative(const RealFn& f, double u, double x) {
    return st_derivative(f, make_params(1.0, 2.0), u, x);
}

double mersenne_derivative(const RealFn& f, double u, double x) {
    return st_derivative(f, make_params(3.0, -2.0), u, x);
}

double pq_derivative(const RealFn& f, double p, double q, double u, double x) {
    return st_derivative(f, make_params(p + q, -p * q), u, x);
}

double chebyshev_derivative(const RealFn& f, double r, double u, double x) {
    return st_derivative(f, make_params(2 * r, -1.0), u, x);
}

double lucas_derivative(const RealFn& f, double P, double Q, double u, double x) {
    return st_derivative(f, make_params(P, -Q), u, x);
}

double q_periodic_eval(const QPeriodic& qp, double x) {
    const double q = qp.params().q();
    if (q < 0) {
        throw Error(ErrorCode::Unsupported, "operators", "q < 0 needs the complex logarithm");
    }
    if (q == 1) throw Error(ErrorCode::DegenerateQ, "operators", "log base q = 1");
    if (q == 0) throw Error(ErrorCode::DomainError, "operators", "log base q = 0");
    if (!(x > 0)) throw Error(ErrorCode::DomainError, "operators", "q-periodic functions need x > 0");
    return qp.G()(std::log(x) / std::log(q));
}

double QPeriodic::operator()(double x) const { return q_periodic_eval(*this, x); }

namespace {

void require_same(const QPeriodic& a, const QPeriodic& b) {
    if (!(a.params() == b.params())) {
        throw Error(ErrorCode::ParamMismatch, "operators", "q-periodic functions over different (s,t)");
    }
}

}  // namespace

QPeriodic operator+(const QPeriodic& a, const QPeriodic& b) {
    require_same(a, b);
    return QPeriodic([ga = a.G(), gb = b.G()](double y) { return ga(y) + gb(y); }, a.params());
}

QPeriodic operator*(const QPeriodic& a, const QPeriodic& b) {
    require_same(a, b);
    return QPeriodic([ga = a.G(), gb = b.G()](double y) { return ga(y) * gb(y); }, a.params());
}

QPeriodic operator*(double c, const QPeriodic& a) {
    return QPeriodic([c, ga = a.G()](double y) { return c * ga(y); }, a.params());
}

ProductRuleResidual product_rule_residual(const RealFn& f, const RealFn& g, const StParams<double>& p, double x) {
    if (x == 0) throw Error(ErrorCode::DomainError, "operators", "product rules are checked at x != 0");
    const RealFn fg = [&](double y) { return f(y) * g(y); };
    const double dfg = st_derivative(fg, p, 1.0, x);
    const double df = st_derivative(f, p, 1.0, x);
    const double dg = st_derivative(g, p, 1.0, x);
    const double phx = p.phi() * x;
    const double ppx = p.phi_prime() * x;
    return {std::abs(dfg - f(phx) * dg - g(ppx) * df), std::abs(dfg - f(ppx) * dg - g(phx) * df)};
}

}  // namespace stcalc
