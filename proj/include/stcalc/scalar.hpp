#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace stcalc {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// The two numeric backends: exact rationals and IEEE double.
template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

template <class T>
inline constexpr bool is_exact_v = std::same_as<T, Rational>;

inline double to_double(double v) { return v; }
inline double to_double(const Rational& v) { return v.convert_to<double>(); }

template <Scalar T>
T pow_int(T base, std::uint64_t e) {
    T result(1);
    while (e != 0) {
        if (e & 1U) result *= base;
        e >>= 1U;
        if (e != 0) base *= base;
    }
    return result;
}

/// n choose 2, the exponent of u in deformed fibotorials.
inline std::uint64_t choose2(std::int64_t n) {
    return n < 2 ? 0 : static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n - 1) / 2;
}

template <Scalar T>
int sign(const T& v) {
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
}

template <Scalar T>
T abs_value(const T& v) {
    return v < 0 ? T(-v) : v;
}

template <Scalar T>
T from_rational(const Rational& r) {
    if constexpr (is_exact_v<T>) {
        return r;
    } else {
        return to_double(r);
    }
}

/// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

/// A numeric literal as typed by a user: `3`, `-2/7`, `0.25`, `1e-3`.
/// Decimal and exponent forms are kept as exact rationals but mark the
/// literal inexact, which forces float mode downstream.
struct Literal {
    Rational value;
    bool exact = true;
};

/// Throws Error(DomainError) on malformed text.
Literal parse_literal(std::string_view text);

}  // namespace stcalc
