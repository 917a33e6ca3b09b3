#pragma once

#include <functional>

#include "stcalc/ward_series.hpp"

namespace stcalc {

using RealFn = std::function<double(double)>;

/// f'(x) by central differences at h = 1e-4, 1e-5, 1e-6 with two Richardson steps.
double numeric_derivative(const RealFn& f, double x);

/// (f(u phi x) - f(u phi' x)) / (u (phi - phi') x); f'(0) at x = 0.
/// With coincident roots the quotient degenerates to f'(u phi x).
double st_derivative(const RealFn& f, const StParams<double>& p, double u, double x);

/// D x^n = {n} x^(n-1) acts on Ward coefficients as a left shift.
template <Scalar T>
TruncatedEgf<T> series_derivative(const TruncatedEgf<T>& f) {
    if (f.order() == 0) return TruncatedEgf<T>::zero(f.params(), 0);
    const auto c = f.coeffs();
    return TruncatedEgf<T>(f.params(), std::vector<T>(c.begin() + 1, c.end()));
}

// Named calculi. Each is st_derivative at the stated (s,t).
double fibonacci_derivative(const RealFn& f, double u, double x);                 // (1,1)
double pell_derivative(const RealFn& f, double u, double x);                      // (2,1)
double jacobsthal_derivative(const RealFn& f, double u, double x);                // (1,2)
double mersenne_derivative(const RealFn& f, double u, double x);                  // (3,-2)
double pq_derivative(const RealFn& f, double p, double q, double u, double x);   // (p+q,-pq)
double chebyshev_derivative(const RealFn& f, double r, double u, double x);      // (2r,-1)
double lucas_derivative(const RealFn& f, double P, double Q, double u, double x);  // (P,-Q)

/// p(x) = G(log_q x) for a period-1 G. Only q > 0 is supported.
class QPeriodic {
public:
    QPeriodic(RealFn G, StParams<double> params) : G_(std::move(G)), params_(std::move(params)) {}

    const RealFn& G() const noexcept { return G_; }
    const StParams<double>& params() const noexcept { return params_; }
    double operator()(double x) const;

    friend QPeriodic operator+(const QPeriodic& a, const QPeriodic& b);
    friend QPeriodic operator*(const QPeriodic& a, const QPeriodic& b);
    friend QPeriodic operator*(double c, const QPeriodic& a);

private:
    RealFn G_;
    StParams<double> params_;
};

double q_periodic_eval(const QPeriodic& qp, double x);

struct ProductRuleResidual {
    double first;   // D(fg) = f(phi x) Dg + g(phi' x) Df
    double second;  // D(fg) = f(phi' x) Dg + g(phi x) Df
    double max() const { return std::max(first, second); }
};

ProductRuleResidual product_rule_residual(const RealFn& f, const RealFn& g, const StParams<double>& p, double x);

}  // namespace stcalc
