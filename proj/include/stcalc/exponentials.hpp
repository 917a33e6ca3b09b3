#pragma once

#include <optional>
#include <span>
#include <vector>

#include "stcalc/ward_series.hpp"

namespace stcalc {

/// Deformed(u), Exp (u = phi) or ExpPrime (u = phi').
struct ExpKind {
    enum class Kind { Deformed, Exp, ExpPrime };

    static ExpKind deformed(double u) { return {Kind::Deformed, u}; }
    static ExpKind exp() { return {Kind::Exp, 0.0}; }
    static ExpKind exp_prime() { return {Kind::ExpPrime, 0.0}; }

    double resolve(const StParams<double>& p) const {
        switch (kind) {
            case Kind::Exp: return p.phi();
            case Kind::ExpPrime: return p.phi_prime();
            case Kind::Deformed: break;
        }
        return u;
    }

    Kind kind;
    double u;
};

/// Where sum u^C(n,2) z^n/{n}! converges, as a function of u alone.
ConvergenceClass exp_domain(const StParams<double>& p, double u);

struct SeriesValue {
    double value;
    double tail_bound;
    int terms;
};

inline constexpr double kDefaultSeriesTol = 1e-15;

/// exp_{s,t}(z,u), summed until a rigorous geometric tail bound drops below tol.
SeriesValue exp_st(const StParams<double>& p, double u, double z, double tol = kDefaultSeriesTol);

inline SeriesValue exp_st(const StParams<double>& p, ExpKind kind, double z, double tol = kDefaultSeriesTol) {
    return exp_st(p, kind.resolve(p), z, tol);
}

/// Ward coefficients u^C(n,2), n = 0..N, of exp_{s,t}(x,u).
template <Scalar T>
TruncatedEgf<T> exp_coefficients(const StParams<T>& p, const T& u, int N) {
    std::vector<T> c;
    c.reserve(static_cast<std::size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) c.push_back(pow_int(u, choose2(n)));
    return TruncatedEgf<T>(p, std::move(c));
}

/// Partial infinite product for Exp or Exp'. Without K, factors are taken
/// until the next one is within 1e-15 of 1.
double exp_product(const StParams<double>& p, ExpKind kind, double z, std::optional<int> K = std::nullopt);

struct PqPower {
    double x;
    double a;
    int n;
    double p;
    double q;
};

/// prod_{k<n} (p^k x - q^k a)
double pq_power(const PqPower& arg);

/// sum_k C(n,k)_{p+q,-pq} p^C(k,2) q^C(n-k,2) x^k (-a)^(n-k)
double pq_power_expanded(const PqPower& arg);

/// Exp(a x) * Exp'(-a y); at most N terms per series factor.
double binomial_exp(const StParams<double>& p, double a, double x, double y, int N);

struct InequalityQuery {
    double v;        // second deformation for monotonicity in u (v > u)
    double s_other;  // compared against s at fixed t
    double t_other;  // compared against t at fixed s
};

struct InequalityRow {
    double x;
    double exp_u;
    double exp_v;
    double chain_mid;  // Exp'(x) when |q| < 1, Exp(x) when |q| > 1
    double chain_top;  // e^x
    double exp_s_other;
    double exp_t_other;
    bool chain_holds;
    bool monotone_u;
    bool monotone_s;
    bool monotone_t;
    std::optional<bool> other_above_ex;  // e^x < Exp(x) (|q| < 1) or Exp'(x) (|q| > 1) inside its pole
};

struct InequalityReport {
    bool chain_regime;  // u < phi' (|q| < 1) or u < phi (|q| > 1)
    std::vector<InequalityRow> rows;
    int skipped_negative;  // x < 0 entries are not evaluated
};

InequalityReport exp_inequality_report(const StParams<double>& p, double u, std::span<const double> x_grid,
                                       const InequalityQuery& query);

}  // namespace stcalc
