#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "stcalc/sequences.hpp"

namespace stcalc {

/// sum_{n<=N} a_n x^n / {n}_{s,t}!
template <Scalar T>
class TruncatedEgf {
public:
    TruncatedEgf(StParams<T> params, std::vector<T> coeffs) : params_(std::move(params)), coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) throw Error(ErrorCode::DomainError, "ward_series", "a series needs at least a_0");
        const auto seq = st_numbers(params_, order());
        for (int n = 1; n <= order(); ++n) detail::require_nonzero_factor(seq[n], n);
    }

    static TruncatedEgf zero(const StParams<T>& p, int order) {
        return TruncatedEgf(p, std::vector<T>(static_cast<std::size_t>(order) + 1, T(0)));
    }
    static TruncatedEgf one(const StParams<T>& p, int order) {
        auto c = std::vector<T>(static_cast<std::size_t>(order) + 1, T(0));
        c[0] = T(1);
        return TruncatedEgf(p, std::move(c));
    }

    const StParams<T>& params() const noexcept { return params_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
    std::span<const T> coeffs() const noexcept { return coeffs_; }
    const T& operator[](int n) const { return coeffs_.at(static_cast<std::size_t>(n)); }

    TruncatedEgf<double> to_double() const {
        std::vector<double> c;
        c.reserve(coeffs_.size());
        for (const T& v : coeffs_) c.push_back(stcalc::to_double(v));
        return TruncatedEgf<double>(params_.to_double_params(), std::move(c));
    }

    friend bool operator==(const TruncatedEgf& a, const TruncatedEgf& b) {
        return a.params_ == b.params_ && a.coeffs_ == b.coeffs_;
    }

private:
    StParams<T> params_;
    std::vector<T> coeffs_;
};

namespace detail {

template <Scalar T>
void require_same_params(const TruncatedEgf<T>& f, const TruncatedEgf<T>& g) {
    if (!(f.params() == g.params())) {
        throw Error(ErrorCode::ParamMismatch, "ward_series", "series built on different (s,t)");
    }
}

}  // namespace detail

template <Scalar T>
TruncatedEgf<T> egf_add(const TruncatedEgf<T>& f, const TruncatedEgf<T>& g) {
    detail::require_same_params(f, g);
    const int order = std::min(f.order(), g.order());
    std::vector<T> c;
    c.reserve(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) c.push_back(f[n] + g[n]);
    return TruncatedEgf<T>(f.params(), std::move(c));
}

/// c_n = sum_k C(n,k)_{s,t} a_k b_{n-k}
template <Scalar T>
TruncatedEgf<T> egf_mul(const TruncatedEgf<T>& f, const TruncatedEgf<T>& g) {
    detail::require_same_params(f, g);
    const int order = std::min(f.order(), g.order());
    std::vector<T> c;
    c.reserve(static_cast<std::size_t>(order) + 1);
    for (int n = 0; n <= order; ++n) {
        const auto row = fibonomial_row(f.params(), n);
        T acc(0);
        for (int k = 0; k <= n; ++k) acc += row[k] * f[k] * g[n - k];
        c.push_back(acc);
    }
    return TruncatedEgf<T>(f.params(), std::move(c));
}

enum class ConvergenceKind { Entire, Disk, PointOnly };

struct ConvergenceClass {
    ConvergenceKind kind;
    std::optional<double> radius;

    bool admits(double x) const {
        switch (kind) {
            case ConvergenceKind::Entire: return true;
            case ConvergenceKind::Disk: return std::abs(x) < *radius;
            case ConvergenceKind::PointOnly: return x == 0;
        }
        return false;
    }
};

inline ConvergenceClass entire() { return {ConvergenceKind::Entire, std::nullopt}; }
inline ConvergenceClass point_only() { return {ConvergenceKind::PointOnly, std::nullopt}; }
inline ConvergenceClass disk(double radius) { return {ConvergenceKind::Disk, radius}; }

/// Which root governs growth of {n}: phi when |q| < 1, phi' when |q| > 1.
/// Also returns |1 - q| or |1 - 1/q| accordingly.
template <Scalar T>
std::pair<Root, double> dominant_root(const StParams<T>& p) {
    if (compare_abs_q_one(p) < 0) return {Root::Phi, std::abs(1.0 - p.q())};
    return {Root::PhiPrime, std::abs(1.0 - 1.0 / p.q())};
}

/// Domain of sum u^C(n,2) a_n z^n/{n}! given alpha = lim |a_{n+1}/a_n|.
/// The divisibility side conditions attached to this classification in
/// the source theory are not checked.
template <Scalar T>
ConvergenceClass classify_series(const StParams<T>& p, const T& u, double alpha) {
    if (!(u > 0)) throw Error(ErrorCode::DomainError, "ward_series", "u must be positive");
    if (!(alpha >= 0)) throw Error(ErrorCode::DomainError, "ward_series", "alpha must be nonnegative");
    if (p.degenerate_q()) {
        if (p.s() == T(2) && p.t() == T(-1)) return u <= T(1) ? entire() : point_only();
        throw Error(ErrorCode::DegenerateQ, "ward_series", "|q| = 1 outside the (2,-1) case");
    }
    const auto [root, gap] = dominant_root(p);
    const int cmp = compare_abs_root(p, root, u);
    if (cmp > 0) return entire();
    if (cmp < 0) return point_only();
    if (alpha == 0) return entire();
    return disk(1.0 / (alpha * gap));
}

struct EgfValue {
    double value;
    double tail_bound;
};

/// sum_{n<=N} u^C(n,2) a_n x^n/{n}! with a geometric tail estimate.
/// Without `alpha` the ratio of the last two nonzero coefficients stands in
/// for it, and only matters on the |u| = |root| boundary.
template <Scalar T>
EgfValue egf_eval(const TruncatedEgf<T>& f, double u, double x, std::optional<double> alpha = std::nullopt) {
    const int order = f.order();
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(order) + 1);
    for (const T& v : f.coeffs()) a.push_back(to_double(v));
    if (x == 0) return {a[0], 0.0};
    if (u == 0) return {a[0] + (order >= 1 ? a[1] * x : 0.0), 0.0};
    const StParams<double> p = f.params().to_double_params();
    if (!alpha) {
        double est = 0;
        for (int n = order; n >= 1; --n) {
            if (a[n] != 0 && a[n - 1] != 0) {
                est = std::abs(a[n] / a[n - 1]);
                break;
            }
        }
        alpha = est;
    }
    const ConvergenceClass cls = classify_series(p, u, *alpha);
    if (!cls.admits(x)) {
        throw Error(ErrorCode::OutsideDomain, "ward_series", "x lies outside the series' convergence domain");
    }
    const auto seq = st_numbers(p, order);
    std::vector<double> terms(static_cast<std::size_t>(order) + 1);
    double w = 1.0;  // u^C(n,2) x^n / {n}!
    double sum = 0.0;
    for (int n = 0; n <= order; ++n) {
        if (n > 0) w *= std::pow(u, n - 1) * x / seq[n];
        terms[n] = a[n] * w;
        sum += terms[n];
    }
    int last = -1, prev = -1;
    for (int n = order; n >= 0; --n) {
        if (terms[n] == 0) continue;
        if (last < 0) {
            last = n;
        } else {
            prev = n;
            break;
        }
    }
    if (prev < 0) return {sum, 0.0};
    const double r = std::pow(std::abs(terms[last] / terms[prev]), 1.0 / (last - prev));
    if (!(r < 1)) {
        throw Error(ErrorCode::NonConvergentSum, "ward_series", "retained terms are not decreasing");
    }
    const double first_omitted = std::abs(terms[last]) * std::pow(r, order + 1 - last);
    return {sum, first_omitted / (1 - r)};
}

}  // namespace stcalc
