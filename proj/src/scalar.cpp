#include "stcalc/scalar.hpp"

#include <cctype>
#include <utility>

#include "stcalc/error.hpp"

namespace stcalc {

std::string to_string(const Rational& r) {
    const BigInt num = boost::multiprecision::numerator(r);
    const BigInt den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();
    return num.str() + "/" + den.str();
}

namespace {

[[noreturn]] void bad_literal(std::string_view text) {
    throw Error(ErrorCode::DomainError, "core_params", "malformed number '" + std::string(text) + "'");
}

BigInt pow10(unsigned e) {
    BigInt r = 1;
    for (unsigned i = 0; i < e; ++i) r *= 10;
    return r;
}

// cpp_int reads a leading 0 as an octal prefix.
BigInt decimal(const std::string& digits) {
    const auto first = digits.find_first_not_of('0');
    return first == std::string::npos ? BigInt(0) : BigInt(digits.substr(first));
}

}  // namespace

Literal parse_literal(std::string_view text) {
    std::size_t i = 0;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        negative = text[i] == '-';
        ++i;
    }
    auto digits = [&](std::string& out) {
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) out += text[i++];
    };
    std::string whole, frac;
    digits(whole);
    Literal lit;
    if (i < text.size() && text[i] == '/') {
        ++i;
        std::string den;
        digits(den);
        if (whole.empty() || den.empty() || i != text.size()) bad_literal(text);
        const BigInt d = decimal(den);
        if (d == 0) bad_literal(text);
        lit.value = Rational(decimal(whole), d);
        if (negative) lit.value = -lit.value;
        return lit;
    }
    if (i < text.size() && text[i] == '.') {
        ++i;
        digits(frac);
        lit.exact = false;
    }
    if (whole.empty() && frac.empty()) bad_literal(text);
    long exponent = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
            eneg = text[i] == '-';
            ++i;
        }
        std::string ed;
        digits(ed);
        if (ed.empty() || ed.size() > 4) bad_literal(text);
        exponent = std::stol(ed);
        if (eneg) exponent = -exponent;
        lit.exact = false;
    }
    if (i != text.size()) bad_literal(text);
    const BigInt mantissa = decimal(whole + frac);
    exponent -= static_cast<long>(frac.size());
    if (exponent >= 0) {
        lit.value = Rational(mantissa * pow10(static_cast<unsigned>(exponent)));
    } else {
        lit.value = Rational(mantissa, pow10(static_cast<unsigned>(-exponent)));
    }
    if (negative) lit.value = -lit.value;
    return lit;
}

}  // namespace stcalc
