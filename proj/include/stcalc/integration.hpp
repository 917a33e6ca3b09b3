#pragma once

#include "stcalc/operators.hpp"

namespace stcalc {

/// Points r * rho^n * c with (rho, c) = (q, 1/phi) when |q| < 1 and
/// (1/q, 1/phi') when |q| > 1, weighted by (1 - rho) r rho^n.
class QLattice {
public:
    QLattice(double endpoint, const StParams<double>& p);

    double endpoint() const noexcept { return endpoint_; }
    double ratio() const noexcept { return ratio_; }
    double scale() const noexcept { return scale_; }
    double point(int n) const { return endpoint_ * std::pow(ratio_, n) * scale_; }
    double weight(int n) const { return (1 - ratio_) * endpoint_ * std::pow(ratio_, n); }

private:
    double endpoint_;
    double ratio_;
    double scale_;
};

inline constexpr double kDefaultIntegralTol = 1e-15;
inline constexpr int kMaxLatticeTerms = 200000;

/// Jackson-type integral over [a, b]: sum_n w_n(b) f(x_n(b)) - w_n(a) f(x_n(a)).
double st_integral(const RealFn& f, double a, double b, const StParams<double>& p, double tol = kDefaultIntegralTol);

/// The integral of x^n/{n}! is x^(n+1)/{n+1}!, a right shift.
template <Scalar T>
TruncatedEgf<T> series_antiderivative(const TruncatedEgf<T>& f) {
    std::vector<T> c;
    c.reserve(static_cast<std::size_t>(f.order()) + 2);
    c.emplace_back(0);
    for (const T& v : f.coeffs()) c.push_back(v);
    return TruncatedEgf<T>(f.params(), std::move(c));
}

double fundamental_theorem_residual(const RealFn& f, double a, double b, const StParams<double>& p);

double integration_by_parts_residual(const RealFn& f, const RealFn& g, double a, double b, const StParams<double>& p);

/// |int_a^b G(log_q x) f(x) - [G(log_q(r/phi)) int_0^r f]_a^b|
double q_periodic_factor_check(const QPeriodic& G, const RealFn& f, double a, double b, const StParams<double>& p);

}  // namespace stcalc
