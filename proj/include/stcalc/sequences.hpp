#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "stcalc/params.hpp"

namespace stcalc {

/// {n}_{s,t} by the defining recurrence {n+2} = s{n+1} + t{n}; no validation of (s,t).
template <Scalar T>
T st_number(const T& s, const T& t, int n) {
    if (n < 0) throw Error(ErrorCode::DomainError, "sequences", "index must be nonnegative");
    if (n == 0) return T(0);
    T prev(0), cur(1);
    for (int k = 1; k < n; ++k) {
        T next = s * cur + t * prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

template <Scalar T>
T st_number(const StParams<T>& p, int n) {
    return st_number(p.s(), p.t(), n);
}

/// {0}..{n_max}.
template <Scalar T>
std::vector<T> st_numbers(const T& s, const T& t, int n_max) {
    std::vector<T> out;
    if (n_max < 0) return out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    out.emplace_back(0);
    if (n_max >= 1) out.emplace_back(1);
    for (int n = 2; n <= n_max; ++n) out.push_back(s * out[n - 1] + t * out[n - 2]);
    return out;
}

template <Scalar T>
std::vector<T> st_numbers(const StParams<T>& p, int n_max) {
    return st_numbers(p.s(), p.t(), n_max);
}

/// (phi^n - phi'^n)/(phi - phi'); n * phi^(n-1) when the roots coincide.
double st_number_binet(const StParams<double>& p, int n);

namespace detail {

template <Scalar T>
void require_nonzero_factor(const T& v, int k) {
    if (v == 0) {
        throw Error(ErrorCode::ZeroFactor, "sequences", "{" + std::to_string(k) + "}_{s,t} vanishes");
    }
}

}  // namespace detail

/// u^C(n,2) * {1}{2}...{n}.
template <Scalar T>
T fibotorial(const StParams<T>& p, const T& u, int n) {
    if (n < 0) throw Error(ErrorCode::DomainError, "sequences", "index must be nonnegative");
    const auto seq = st_numbers(p, n);
    T prod(1);
    for (int k = 1; k <= n; ++k) {
        detail::require_nonzero_factor(seq[k], k);
        prod *= seq[k];
    }
    return pow_int(u, choose2(n)) * prod;
}

/// u^(k(n-k)) {n}!/({k}!{n-k}!). Exact ratio for rationals; log-space product for doubles.
template <Scalar T>
T fibonomial(const StParams<T>& p, const T& u, int n, int k) {
    if (k < 0 || k > n) throw Error(ErrorCode::DomainError, "sequences", "fibonomial needs 0 <= k <= n");
    const auto seq = st_numbers(p, n);
    for (int j = 1; j <= n; ++j) detail::require_nonzero_factor(seq[j], j);
    const int m = std::min(k, n - k);
    const std::uint64_t ue = static_cast<std::uint64_t>(k) * static_cast<std::uint64_t>(n - k);
    if constexpr (is_exact_v<T>) {
        T num(1), den(1);
        for (int j = 0; j < m; ++j) {
            num *= seq[n - j];
            den *= seq[j + 1];
        }
        return pow_int(u, ue) * num / den;
    } else {
        if (u == 0 && ue != 0) return 0.0;
        double log_mag = ue == 0 ? 0.0 : static_cast<double>(ue) * std::log(std::abs(u));
        int sgn = (u < 0 && (ue & 1U)) ? -1 : 1;
        for (int j = 0; j < m; ++j) {
            log_mag += std::log(std::abs(seq[n - j])) - std::log(std::abs(seq[j + 1]));
            if ((seq[n - j] < 0) != (seq[j + 1] < 0)) sgn = -sgn;
        }
        return sgn * std::exp(log_mag);
    }
}

/// Row of fibonomials C(n,0..n) with u = 1, built by the fibotorial ratio.
template <Scalar T>
std::vector<T> fibonomial_row(const StParams<T>& p, int n) {
    std::vector<T> row;
    row.reserve(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) row.push_back(fibonomial(p, T(1), n, k));
    return row;
}

template <Scalar T>
struct Mat2 {
    T a11, a12, a21, a22;

    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
                x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
    }
    friend bool operator==(const Mat2&, const Mat2&) = default;
};

/// [[u s, u^2 t],[1, 0]]^n by the closed form in deformed {n}.
template <Scalar T>
Mat2<T> matrix_power(const StParams<T>& p, const T& u, int n) {
    if (n < 1) throw Error(ErrorCode::DomainError, "sequences", "matrix power needs n >= 1");
    const auto seq = st_numbers(p, n + 1);
    const auto un = [&](int e) { return pow_int(u, static_cast<std::uint64_t>(e)); };
    return {un(n) * seq[n + 1], un(n + 1) * p.t() * seq[n], un(n - 1) * seq[n], un(n) * p.t() * seq[n - 1]};
}

/// The same matrix by n-1 explicit multiplications.
template <Scalar T>
Mat2<T> matrix_power_iterated(const StParams<T>& p, const T& u, int n) {
    if (n < 1) throw Error(ErrorCode::DomainError, "sequences", "matrix power needs n >= 1");
    const Mat2<T> base{u * p.s(), u * u * p.t(), T(1), T(0)};
    Mat2<T> acc = base;
    for (int i = 1; i < n; ++i) acc = acc * base;
    return acc;
}

enum class LimitKind { Zero, Finite, Divergent };

/// Behaviour of u^(n-1){n}_{s,t} as n grows. When the governing root is
/// negative the threshold sequence alternates in sign; `alternating` is
/// then set and `limit` is the limit of its absolute value.
struct LimitClass {
    LimitKind kind;
    std::optional<double> limit;
    bool alternating = false;
};

template <Scalar T>
LimitClass limit_class(const StParams<T>& p, const T& u) {
    if (u < 0) throw Error(ErrorCode::DomainError, "sequences", "u must be nonnegative");
    const int qcmp = compare_abs_q_one(p);
    if (qcmp == 0) throw Error(ErrorCode::DegenerateQ, "sequences", "|q| = 1");
    if (u == 0) return {LimitKind::Zero, std::nullopt};
    const Root root = qcmp < 0 ? Root::Phi : Root::PhiPrime;
    const int cmp = compare_abs_root(p, root, T(T(1) / u));
    if (cmp < 0) return {LimitKind::Zero, std::nullopt};
    if (cmp > 0) return {LimitKind::Divergent, std::nullopt};
    const double q = p.q();
    const double value = qcmp < 0 ? 1.0 / (1.0 - q) : 1.0 / (1.0 - 1.0 / q);
    const double r = root == Root::Phi ? p.phi() : p.phi_prime();
    return {LimitKind::Finite, value, r < 0};
}

template <Scalar T>
struct ChebyshevCheck {
    T fibonacci_form;
    T chebyshev_form;
    bool agree;
};

/// {n}_{2t,-1} against U_{n-1}(t) from U_{k+1} = 2t U_k - U_{k-1}.
template <Scalar T>
ChebyshevCheck<T> chebyshev_check(const T& tval, int n) {
    if (n < 0) throw Error(ErrorCode::DomainError, "sequences", "index must be nonnegative");
    const T fib = st_number(T(2 * tval), T(-1), n);
    // U_{-1} = 0, U_0 = 1.
    T prev(0), cur(1);
    for (int k = 0; k < n - 1; ++k) {
        T next = T(2) * tval * cur - prev;
        prev = std::move(cur);
        cur = std::move(next);
    }
    const T cheb = n == 0 ? T(0) : cur;
    bool agree;
    if constexpr (is_exact_v<T>) {
        agree = fib == cheb;
    } else {
        agree = std::abs(fib - cheb) <= 1e-10 * std::max(1.0, std::abs(cheb));
    }
    return {fib, cheb, agree};
}

}  // namespace stcalc
