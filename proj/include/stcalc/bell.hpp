#pragma once

#include <span>
#include <utility>
#include <vector>

#include "stcalc/scalar.hpp"
#include "stcalc/error.hpp"

namespace stcalc {

/// One partition of n into k parts, as (part size h, multiplicity j_h) pairs,
/// with its integer weight n!/(prod j_h! (h!)^j_h).
struct BellTerm {
    std::vector<std::pair<int, int>> parts;
    BigInt coefficient;
};

/// Memoized partition table for B_{n,k}. Thread-safe.
const std::vector<BellTerm>& bell_terms(int n, int k);

/// Largest n accepted by bell_terms; 64 unless changed.
int bell_max_n() noexcept;
void set_bell_max_n(int n);

template <Scalar T>
struct BellArgs {
    BellArgs(int n_, int k_, std::vector<T> x_) : n(n_), k(k_), x(std::move(x_)) {
        if (n < 1 || k < 1 || k > n) {
            throw Error(ErrorCode::DomainError, "bell", "partial Bell polynomial needs 1 <= k <= n");
        }
        if (static_cast<int>(x.size()) != n - k + 1) {
            throw Error(ErrorCode::DomainError, "bell", "B_{n,k} takes exactly n-k+1 arguments");
        }
    }
    int n;
    int k;
    std::vector<T> x;
};

/// B_{n,k}(x_1, ..., x_{n-k+1}); `x[0]` is x_1. Extra trailing entries are ignored.
template <Scalar T>
T partial_bell(int n, int k, std::span<const T> x) {
    if (n == 0 && k == 0) return T(1);
    if (k < 1 || k > n) return T(0);
    if (static_cast<int>(x.size()) < n - k + 1) {
        throw Error(ErrorCode::DomainError, "bell", "too few arguments for B_{n,k}");
    }
    T total(0);
    for (const BellTerm& term : bell_terms(n, k)) {
        T prod(1);
        for (const auto& [h, j] : term.parts) prod *= pow_int(x[h - 1], static_cast<std::uint64_t>(j));
        if constexpr (is_exact_v<T>) {
            total += Rational(term.coefficient) * prod;
        } else {
            total += term.coefficient.template convert_to<double>() * prod;
        }
    }
    return total;
}

template <Scalar T>
T partial_bell(const BellArgs<T>& args) {
    return partial_bell<T>(args.n, args.k, std::span<const T>(args.x));
}

/// Faa di Bruno: classical EGF coefficients of f(g(x)) through order N = g.size()-1.
/// `f_derivs[k]` is f^(k)(b_0); missing entries count as zero.
template <Scalar T>
std::vector<T> compose_egf(std::span<const T> f_derivs, std::span<const T> g) {
    if (g.empty()) return {};
    const int order = static_cast<int>(g.size()) - 1;
    std::vector<T> out(g.size(), T(0));
    if (!f_derivs.empty()) out[0] = f_derivs[0];
    const std::span<const T> tail = g.subspan(1);
    for (int n = 1; n <= order; ++n) {
        T c(0);
        for (int k = 1; k <= n && k < static_cast<int>(f_derivs.size()); ++k) {
            if (f_derivs[k] == 0) continue;
            c += f_derivs[k] * partial_bell<T>(n, k, tail);
        }
        out[n] = c;
    }
    return out;
}

}  // namespace stcalc
