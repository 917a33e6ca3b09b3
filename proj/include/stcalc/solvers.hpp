#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stcalc/bell.hpp"
#include "stcalc/exponentials.hpp"
#include "stcalc/expr.hpp"
#include "stcalc/integration.hpp"

namespace stcalc {

/// (a (+) b)^n_{1,u} = prod_{k<n} (a + b u^k)
template <Scalar T>
struct RisingFactor {
    T a;
    T b;
    T u;

    T value(int n) const {
        if (n < 0) throw Error(ErrorCode::DomainError, "solvers", "n must be nonnegative");
        T prod(1);
        T uk(1);
        for (int k = 0; k < n; ++k) {
            prod *= a + b * uk;
            uk *= u;
        }
        return prod;
    }

    /// value(0), ..., value(N)
    std::vector<T> values(int N) const {
        std::vector<T> out;
        out.reserve(static_cast<std::size_t>(N) + 1);
        T prod(1);
        T uk(1);
        out.push_back(prod);
        for (int k = 0; k < N; ++k) {
            prod *= a + b * uk;
            uk *= u;
            out.push_back(prod);
        }
        return out;
    }
};

enum class RegionLabel { S1, S2, S3, S4, S5, S6, S7, S8, S9, T1, T2, T3, T4, T5, T6, T7, T8, T9, None };

std::string label_name(RegionLabel label);

/// S compares u with phi and uses q; T compares u with phi' and uses 1/q.
enum class Regime { Auto, S, T };

struct Region {
    RegionLabel label;
    std::optional<ConvergenceClass> domain;  // empty when unclassified
    std::string branch;  // "|u|<|root|", "|u|=|root|", or why nothing matched
};

/// Where E_{s,t}(a,b,u;z) = sum (a (+) b)^n_{1,u} z^n/{n}! converges.
/// When a or b is zero the series is an exponential and the label is None.
template <Scalar T>
Region classify_E(const StParams<T>& p, const T& u, const T& a, const T& b, Regime regime = Regime::Auto);

struct LatticePoint {
    double x;
    double y;
    double residual;
};

struct SolveReport {
    std::optional<TruncatedEgf<double>> series;
    std::optional<TruncatedEgf<Rational>> exact_series;
    std::vector<LatticePoint> lattice;
    double max_residual = 0;
    std::optional<double> error_bound;
    std::optional<Region> region;
    std::vector<double> differences;  // sup over the lattice of |phi_{k+1} - phi_k|
    double interval = 0;              // right end of the interval the lattice lives in
    std::string binding;              // which constraint fixed `interval`
};

inline constexpr int kResidualPoints = 16;
inline constexpr double kDefaultXMax = 1.0;

/// x_max rho^j |c| for j < 16: points whose images under phi and phi' stay within x_max.
std::vector<double> residual_lattice(const StParams<double>& p, double x_max);

/// y with y(0) = xi solving D y = a y(u x); Ward coefficients xi a^n u^C(n,2).
template <Scalar T>
SolveReport solve_linear_pantograph(const StParams<T>& p, const T& a, const T& u, const T& xi, int N,
                                    double x_max = kDefaultXMax);

/// sum u^C(n,2) a^n p(u^n x/phi^n) x^n/{n}!, with p = G(log_q |.|).
double modulated_solution(const StParams<double>& p, double a, double u, const QPeriodic& G, double x, int N);

/// max over the residual lattice of |D y - a y(u.)| for the modulated solution.
double modulated_max_residual(const StParams<double>& p, double a, double u, const QPeriodic& G, int N,
                              double x_max = kDefaultXMax);

/// y with y(0) = 1 solving D y = a y + b y(u x); Ward coefficients (a (+) b)^n_{1,u}.
template <Scalar T>
SolveReport two_term_pantograph(const StParams<T>& p, const T& a, const T& b, const T& u, int N,
                                double x_max = kDefaultXMax);

/// K-factor product form of E_q(a,b;z).
double Eq_product(double q, double a, double b, double z, int K);

/// D y + y = y(x/v)/v, y(0) = xi.
template <Scalar T>
SolveReport ambartsumian(const StParams<T>& p, const T& v, const T& xi, int N, double x_max = kDefaultXMax);

/// D y = f(y(u x)), y(0) = y0, via partial Bell polynomials. `f_derivs[k]` is f^(k)(y0).
/// Returns ordinary power-series coefficients p_0..p_N.
template <Scalar T>
std::vector<T> bell_power_coefficients(const StParams<T>& p, std::span<const T> f_derivs, const T& u, const T& y0,
                                       int N);

/// f^(0..N)(y0) of an expression in one variable (y or yu) by truncated Taylor arithmetic.
template <Scalar T>
std::vector<T> taylor_derivatives(const Expr& f, const T& y0, int N);

template <Scalar T>
SolveReport bell_autonomous_solve(const StParams<T>& p, const Expr& f, const T& u, const T& y0, int N,
                                  double x_max = kDefaultXMax);

template <Scalar T>
struct EquationSpec {
    StParams<T> params;
    T u;
    Expr rhs;  // f(x, y, yu)
    T y0;
    double eta = 0;  // initial abscissa; only 0 is supported
};

struct ApproximationOptions {
    double a_dom = kDefaultXMax;  // x half-width of the rectangle
    double b = 1.0;               // y half-height of the rectangle
    std::optional<double> L1;     // sup |df/dy|
    std::optional<double> L2;     // sup |df/dyu|
    std::optional<double> M;      // sup |f|
    Regime regime = Regime::Auto;
    bool lattice_mode = false;    // forced on when the rhs is not polynomial
};

inline constexpr double kLipschitzSafety = 1.5;

struct RectangleBounds {
    double M;
    double L1;
    double L2;
};

/// Samples f and its partial derivatives on [0,a] x [y0-b, y0+b]^2, scaled by kLipschitzSafety.
RectangleBounds estimate_bounds(const Expr& rhs, double y0, double a, double b);

/// Series mode (polynomial rhs) keeps Ward coefficients of each iterate;
/// lattice mode carries values on the q-geometric lattice through st_integral sums.
template <Scalar T>
SolveReport successive_approximation(const EquationSpec<T>& spec, int iterations, int N,
                                     const ApproximationOptions& opts = {});

/// M a^{p+1} (L1 (+) L2)^{p+1}_{1,u} / ((L1+L2) {p+1}_{|s|,t}!) E_{|s|,t}(L1, L2 u^{p+1}, u; a)
double approximation_error_bound(const StParams<double>& p, double M, double L1, double L2, double u, double a_dom,
                                 int iter_p, int N);

}  // namespace stcalc
