#pragma once

#include <vector>

#include "stcalc/error.hpp"
#include "stcalc/scalar.hpp"

namespace stcalc {

/// Ordinary power series c_0 + c_1 e + ... + c_N e^N with truncating arithmetic.
/// Serves both as Taylor-mode automatic differentiation and as the
/// iterate representation in series-mode successive approximation.
template <Scalar T>
class PowerSeries {
public:
    explicit PowerSeries(int order, T constant = T(0)) : c_(static_cast<std::size_t>(order) + 1, T(0)) {
        c_[0] = std::move(constant);
    }
    explicit PowerSeries(std::vector<T> coeffs) : c_(std::move(coeffs)) {
        if (c_.empty()) c_.emplace_back(0);
    }

    /// at + e
    static PowerSeries variable(int order, T at) {
        PowerSeries r(order, std::move(at));
        if (order >= 1) r.c_[1] = T(1);
        return r;
    }

    int order() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const T& operator[](int n) const { return c_[static_cast<std::size_t>(n)]; }
    T& operator[](int n) { return c_[static_cast<std::size_t>(n)]; }
    const std::vector<T>& coeffs() const noexcept { return c_; }

    double evaluate(double e) const {
        double acc = 0;
        for (int n = order(); n >= 0; --n) acc = acc * e + to_double(c_[n]);
        return acc;
    }

    friend PowerSeries operator+(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        for (int n = 0; n <= r.order(); ++n) r[n] = a[n] + b[n];
        return r;
    }
    friend PowerSeries operator-(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        for (int n = 0; n <= r.order(); ++n) r[n] = a[n] - b[n];
        return r;
    }
    friend PowerSeries operator-(const PowerSeries& a) {
        PowerSeries r(a.order());
        for (int n = 0; n <= r.order(); ++n) r[n] = -a[n];
        return r;
    }
    friend PowerSeries operator*(const PowerSeries& a, const PowerSeries& b) {
        PowerSeries r(std::min(a.order(), b.order()));
        for (int i = 0; i <= r.order(); ++i) {
            if (a[i] == 0) continue;
            for (int j = 0; i + j <= r.order(); ++j) r[i + j] += a[i] * b[j];
        }
        return r;
    }
    friend PowerSeries operator/(const PowerSeries& a, const PowerSeries& b) {
        if (b[0] == 0) {
            throw Error(ErrorCode::DomainError, "solvers", "division by a series with zero constant term");
        }
        PowerSeries r(std::min(a.order(), b.order()));
        for (int n = 0; n <= r.order(); ++n) {
            T acc = a[n];
            for (int k = 1; k <= n; ++k) acc -= b[k] * r[n - k];
            r[n] = acc / b[0];
        }
        return r;
    }

private:
    std::vector<T> c_;
};

}  // namespace stcalc
