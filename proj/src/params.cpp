#include "stcalc/params.hpp"

namespace stcalc {

namespace {

std::optional<BigInt> exact_isqrt(const BigInt& v) {
    if (v < 0) return std::nullopt;
    BigInt r = boost::multiprecision::sqrt(v);
    if (r * r != v) return std::nullopt;
    return r;
}

}  // namespace

std::optional<std::pair<Rational, Rational>> rational_roots(const StParams<Rational>& p) {
    const Rational& d = p.discriminant();
    const auto num = exact_isqrt(boost::multiprecision::numerator(d));
    const auto den = exact_isqrt(boost::multiprecision::denominator(d));
    if (!num || !den) return std::nullopt;
    const Rational root(*num, *den);
    return std::make_pair((p.s() + root) / 2, (p.s() - root) / 2);
}

}  // namespace stcalc
