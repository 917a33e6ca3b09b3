#include "stcalc/integration.hpp"

#include <cmath>

namespace stcalc {

namespace {

// Neumaier's compensated sum.
class CompensatedSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0;
    double comp_ = 0;
};

}  // namespace

QLattice::QLattice(double endpoint, const StParams<double>& p) : endpoint_(endpoint) {
    if (p.degenerate_q()) throw Error(ErrorCode::DegenerateQ, "integration", "the lattice needs q != 1");
    if (compare_abs_q_one(p) < 0) {
        ratio_ = p.q();
        scale_ = 1.0 / p.phi();
    } else {
        ratio_ = 1.0 / p.q();
        scale_ = 1.0 / p.phi_prime();
    }
}

double st_integral(const RealFn& f, double a, double b, const StParams<double>& p, double tol) {
    const QLattice la(a, p);
    const QLattice lb(b, p);
    const double threshold = tol * (1 - std::abs(lb.ratio()));
    CompensatedSum sum;
    int quiet = 0;
    for (int n = 0; n < kMaxLatticeTerms; ++n) {
        double term = 0;
        if (b != 0) term += lb.weight(n) * f(lb.point(n));
        if (a != 0) term -= la.weight(n) * f(la.point(n));
        sum.add(term);
        if (std::abs(term) < threshold) {
            if (++quiet >= 5) return sum.value();
        } else {
            quiet = 0;
        }
    }
    throw Error(ErrorCode::NonConvergentSum, "integration", "lattice sum did not settle within the term cap");
}

double fundamental_theorem_residual(const RealFn& f, double a, double b, const StParams<double>& p) {
    const RealFn df = [&](double x) { return st_derivative(f, p, 1.0, x); };
    return std::abs(st_integral(df, a, b, p) - (f(b) - f(a)));
}

double integration_by_parts_residual(const RealFn& f, const RealFn& g, double a, double b, const StParams<double>& p) {
    const double phi = p.phi();
    const double phip = p.phi_prime();
    const RealFn lhs = [&](double x) { return st_derivative(f, p, 1.0, x) * g(phip * x); };
    const RealFn rhs = [&](double x) { return f(phi * x) * st_derivative(g, p, 1.0, x); };
    const double boundary = f(b) * g(b) - f(a) * g(a);
    return std::abs(st_integral(lhs, a, b, p) - boundary + st_integral(rhs, a, b, p));
}

double q_periodic_factor_check(const QPeriodic& G, const RealFn& f, double a, double b, const StParams<double>& p) {
    if (!(0 <= a && a < b)) throw Error(ErrorCode::DomainError, "integration", "need 0 <= a < b");
    const double q = p.q();
    if (!(q > 0 && q < 1)) throw Error(ErrorCode::DomainError, "integration", "need 0 < q < 1");
    const RealFn weighted = [&](double x) { return G(x) * f(x); };
    const double lhs = st_integral(weighted, a, b, p);
    const double phi = p.phi();
    double rhs = G(b / phi) * st_integral(f, 0.0, b, p);
    if (a > 0) rhs -= G(a / phi) * st_integral(f, 0.0, a, p);
    return std::abs(lhs - rhs);
}

}  // namespace stcalc
