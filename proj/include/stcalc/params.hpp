#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>

#include "stcalc/error.hpp"
#include "stcalc/scalar.hpp"

namespace stcalc {

/// A validated recurrence pair (s,t) with s != 0 and s^2 + 4t >= 0.
///
/// The roots phi >= phi' of x^2 - s x - t and the ratio q = phi'/phi are
/// irrational in general, so they are always held as doubles; the exact
/// backend keeps s, t and the discriminant as rationals and answers root
/// comparisons exactly (see compare_abs_root). A zero discriminant gives
/// q = 1, which is accepted but flagged by degenerate_q().
template <Scalar T>
class StParams {
public:
    StParams(T s, T t) : s_(std::move(s)), t_(std::move(t)) {
        if (s_ == 0) {
            throw Error(ErrorCode::DegenerateParams, "core_params", "s must be nonzero");
        }
        disc_ = s_ * s_ + T(4) * t_;
        if (disc_ < 0) {
            throw Error(ErrorCode::DegenerateParams, "core_params", "s^2 + 4t must be positive");
        }
        const double sd = to_double(s_);
        const double td = to_double(t_);
        const double root = std::sqrt(to_double(disc_));
        // Take the root without cancellation, then recover the other from phi*phi' = -t.
        if (sd > 0) {
            phi_ = (sd + root) / 2;
            phi_prime_ = -td / phi_;
        } else {
            phi_prime_ = (sd - root) / 2;
            phi_ = -td / phi_prime_;
        }
        if (disc_ == 0) phi_prime_ = phi_;
        q_ = phi_prime_ / phi_;
    }

    const T& s() const noexcept { return s_; }
    const T& t() const noexcept { return t_; }
    const T& discriminant() const noexcept { return disc_; }
    double phi() const noexcept { return phi_; }
    double phi_prime() const noexcept { return phi_prime_; }
    double q() const noexcept { return q_; }
    bool degenerate_q() const noexcept { return disc_ == 0; }

    StParams<double> to_double_params() const { return StParams<double>(to_double(s_), to_double(t_)); }

    friend bool operator==(const StParams& a, const StParams& b) { return a.s_ == b.s_ && a.t_ == b.t_; }

private:
    T s_;
    T t_;
    T disc_;
    double phi_ = 0;
    double phi_prime_ = 0;
    double q_ = 0;
};

template <Scalar T>
StParams<T> make_params(T s, T t) {
    return StParams<T>(std::move(s), std::move(t));
}

template <Scalar T>
struct Deformation {
    explicit Deformation(T value) : u(std::move(value)) {
        if (!(u > 0)) throw Error(ErrorCode::DomainError, "core_params", "deformation u must be positive");
    }
    T u;
};

/// (s,t) -> (u s, u^2 t). phi scales by u, q is unchanged.
template <Scalar T>
StParams<T> deform(const StParams<T>& p, const Deformation<T>& d) {
    return StParams<T>(d.u * p.s(), d.u * d.u * p.t());
}

/// Exact (phi, phi') when the discriminant is the square of a rational.
std::optional<std::pair<Rational, Rational>> rational_roots(const StParams<Rational>& p);

enum class Root { Phi, PhiPrime };

namespace detail {

/// Sign of alpha + beta*sqrt(disc), exact for rationals.
inline int surd_sign(const Rational& alpha, const Rational& beta, const Rational& disc) {
    const int sa = sign(alpha);
    const int sb = disc == 0 ? 0 : sign(beta);
    if (sb == 0) return sa;
    if (sa >= 0 && sb > 0) return 1;
    if (sa <= 0 && sb < 0) return -1;
    const Rational lhs = alpha * alpha;
    const Rational rhs = beta * beta * disc;
    const int cmp = lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
    return sa > 0 ? cmp : -cmp;
}

inline constexpr double kRootTol = 1e-12;

}  // namespace detail

/// sign(|root| - c) for c >= 0. Exact for rationals, 1e-12 relative otherwise.
template <Scalar T>
int compare_abs_root(const StParams<T>& p, Root which, const T& c) {
    if constexpr (is_exact_v<T>) {
        const Rational beta = which == Root::Phi ? Rational(1, 2) : Rational(-1, 2);
        const auto root_minus = [&](const Rational& v) {
            return detail::surd_sign(p.s() / 2 - v, beta, p.discriminant());
        };
        if (c == 0) return root_minus(Rational(0)) == 0 ? 0 : 1;
        const int below = root_minus(c);
        const int above = root_minus(-c);
        if (below == 0 || above == 0) return 0;
        return (below < 0 && above > 0) ? -1 : 1;
    } else {
        const double r = std::abs(which == Root::Phi ? p.phi() : p.phi_prime());
        const double scale = std::max({1.0, r, std::abs(c)});
        if (std::abs(r - c) <= detail::kRootTol * scale) return 0;
        return r < c ? -1 : 1;
    }
}

/// sign(|q| - 1): -1 when s > 0, +1 when s < 0, 0 when the discriminant vanishes.
template <Scalar T>
int compare_abs_q_one(const StParams<T>& p) {
    if (p.degenerate_q()) return 0;
    return p.s() > 0 ? -1 : 1;
}

}  // namespace stcalc
