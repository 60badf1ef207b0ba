#pragma once

// Truncated Taylor series ("jets") of a scalar function of one variable.
//
// A Jet<Order> stores the normalized Taylor coefficients c_k = f^(k)(x0)/k!
// for k = 0..Order.  Arithmetic and the elementary functions below propagate
// those coefficients exactly through the given order, so the value and all
// derivatives up to Order come out with machine precision.

#include <array>
#include <cmath>
#include <cstddef>

namespace gnr {

namespace detail {

constexpr double factorial(int k) {
    double r = 1.0;
    for (int i = 2; i <= k; ++i) r *= i;
    return r;
}

// q = a / b on raw coefficient arrays of equal length.
template <std::size_t Len>
std::array<double, Len> series_div(const std::array<double, Len>& a, const std::array<double, Len>& b) {
    std::array<double, Len> q{};
    for (std::size_t k = 0; k < Len; ++k) {
        double acc = a[k];
        for (std::size_t j = 1; j <= k; ++j) acc -= b[j] * q[k - j];
        q[k] = acc / b[0];
    }
    return q;
}

}  // namespace detail

template <int Order>
class Jet {
    static_assert(Order >= 0, "jet order must be non-negative");

public:
    static constexpr int order = Order;
    using Coefficients = std::array<double, Order + 1>;

    constexpr Jet() : c_{} {}
    constexpr explicit Jet(double value) : c_{} { c_[0] = value; }

    static constexpr Jet constant(double value) { return Jet(value); }

    /// The identity function expanded at x0.
    static constexpr Jet variable(double x0) {
        Jet j(x0);
        if constexpr (Order >= 1) j.c_[1] = 1.0;
        return j;
    }

    static constexpr Jet from_taylor(const Coefficients& c) {
        Jet j;
        j.c_ = c;
        return j;
    }

    constexpr double value() const { return c_[0]; }
    constexpr double taylor(int k) const { return c_[static_cast<std::size_t>(k)]; }
    constexpr const Coefficients& taylor_coefficients() const { return c_; }

    /// k-th derivative at the expansion point.
    constexpr double derivative(int k) const { return detail::factorial(k) * c_[static_cast<std::size_t>(k)]; }

    template <int M>
        requires(M <= Order)
    constexpr Jet<M> truncate() const {
        typename Jet<M>::Coefficients r{};
        for (int k = 0; k <= M; ++k) r[static_cast<std::size_t>(k)] = c_[static_cast<std::size_t>(k)];
        return Jet<M>::from_taylor(r);
    }

    /// Jet of f' (one order lower).
    constexpr Jet<Order - 1> differentiate() const
        requires(Order >= 1)
    {
        typename Jet<Order - 1>::Coefficients r{};
        for (int k = 0; k < Order; ++k)
            r[static_cast<std::size_t>(k)] = (k + 1) * c_[static_cast<std::size_t>(k + 1)];
        return Jet<Order - 1>::from_taylor(r);
    }

    constexpr Jet operator-() const {
        Jet r;
        for (std::size_t k = 0; k < c_.size(); ++k) r.c_[k] = -c_[k];
        return r;
    }

    constexpr Jet& operator+=(const Jet& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
        return *this;
    }
    constexpr Jet& operator-=(const Jet& o) {
        for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
        return *this;
    }
    constexpr Jet& operator*=(double a) {
        for (auto& x : c_) x *= a;
        return *this;
    }
    constexpr Jet& operator+=(double a) {
        c_[0] += a;
        return *this;
    }

    friend constexpr Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend constexpr Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend constexpr Jet operator+(Jet a, double b) { return a += b; }
    friend constexpr Jet operator+(double a, Jet b) { return b += a; }
    friend constexpr Jet operator-(Jet a, double b) { return a += -b; }
    friend constexpr Jet operator-(double a, const Jet& b) { return (-b) + a; }
    friend constexpr Jet operator*(Jet a, double b) { return a *= b; }
    friend constexpr Jet operator*(double a, Jet b) { return b *= a; }
    friend constexpr Jet operator/(Jet a, double b) { return a *= 1.0 / b; }

    friend constexpr Jet operator*(const Jet& a, const Jet& b) {
        Jet r;
        for (std::size_t k = 0; k < r.c_.size(); ++k)
            for (std::size_t j = 0; j <= k; ++j) r.c_[k] += a.c_[j] * b.c_[k - j];
        return r;
    }

    friend Jet operator/(const Jet& a, const Jet& b) { return from_taylor(detail::series_div(a.c_, b.c_)); }
    friend Jet operator/(double a, const Jet& b) { return Jet(a) / b; }

private:
    Coefficients c_;
};

using Jet4 = Jet<4>;

template <int N>
Jet<N> exp(const Jet<N>& a) {
    typename Jet<N>::Coefficients e{};
    const auto& c = a.taylor_coefficients();
    e[0] = std::exp(c[0]);
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * c[j] * e[k - j];
        e[k] = acc / k;
    }
    return Jet<N>::from_taylor(e);
}

/// Natural logarithm; requires a.value() > 0.
template <int N>
Jet<N> log(const Jet<N>& a) {
    typename Jet<N>::Coefficients l{};
    const auto& c = a.taylor_coefficients();
    l[0] = std::log(c[0]);
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int j = 1; j < k; ++j) acc += j * l[j] * c[k - j];
        l[k] = (c[k] - acc / k) / c[0];
    }
    return Jet<N>::from_taylor(l);
}

/// Square root; derivatives require a.value() > 0.
template <int N>
Jet<N> sqrt(const Jet<N>& a) {
    typename Jet<N>::Coefficients r{};
    const auto& c = a.taylor_coefficients();
    r[0] = std::sqrt(c[0]);
    for (int k = 1; k <= N; ++k) {
        double acc = c[k];
        for (int j = 1; j < k; ++j) acc -= r[j] * r[k - j];
        r[k] = acc / (2.0 * r[0]);
    }
    return Jet<N>::from_taylor(r);
}

template <int N>
void sincos(const Jet<N>& a, Jet<N>& sin_out, Jet<N>& cos_out) {
    typename Jet<N>::Coefficients s{}, co{};
    const auto& c = a.taylor_coefficients();
    s[0] = std::sin(c[0]);
    co[0] = std::cos(c[0]);
    for (int k = 1; k <= N; ++k) {
        double as = 0.0, ac = 0.0;
        for (int j = 1; j <= k; ++j) {
            as += j * c[j] * co[k - j];
            ac += j * c[j] * s[k - j];
        }
        s[k] = as / k;
        co[k] = -ac / k;
    }
    sin_out = Jet<N>::from_taylor(s);
    cos_out = Jet<N>::from_taylor(co);
}

template <int N>
Jet<N> sin(const Jet<N>& a) {
    Jet<N> s, c;
    sincos(a, s, c);
    return s;
}

template <int N>
Jet<N> cos(const Jet<N>& a) {
    Jet<N> s, c;
    sincos(a, s, c);
    return c;
}

template <int N>
Jet<N> tan(const Jet<N>& a) {
    // t' = (1 + t^2) a'
    typename Jet<N>::Coefficients t{}, w{};
    const auto& c = a.taylor_coefficients();
    t[0] = std::tan(c[0]);
    w[0] = 1.0 + t[0] * t[0];
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j) acc += j * c[j] * w[k - j];
        t[k] = acc / k;
        double wk = 0.0;
        for (int j = 0; j <= k; ++j) wk += t[j] * t[k - j];
        w[k] = wk;
    }
    return Jet<N>::from_taylor(t);
}

namespace detail {

// Integrate y' = a' / d where d is given as a jet of the same order as a.
template <int N>
Jet<N> integrate_ratio(double y0, const Jet<N>& a, const Jet<N>& d) {
    typename Jet<N>::Coefficients y{};
    y[0] = y0;
    if constexpr (N >= 1) {
        std::array<double, N> da{}, dd{};
        const auto& ca = a.taylor_coefficients();
        const auto& cd = d.taylor_coefficients();
        for (int m = 0; m < N; ++m) {
            da[m] = (m + 1) * ca[m + 1];
            dd[m] = cd[m];
        }
        const auto q = series_div(da, dd);
        for (int k = 1; k <= N; ++k) y[k] = q[k - 1] / k;
    }
    return Jet<N>::from_taylor(y);
}

}  // namespace detail

/// Arcsine; derivatives require |a.value()| < 1.
template <int N>
Jet<N> asin(const Jet<N>& a) {
    return detail::integrate_ratio(std::asin(a.value()), a, sqrt(1.0 - a * a));
}

template <int N>
Jet<N> atan(const Jet<N>& a) {
    return detail::integrate_ratio(std::atan(a.value()), a, 1.0 + a * a);
}

/// |a|; derivatives are those of sign(a0)*a, so a0 must be away from zero.
template <int N>
Jet<N> abs(const Jet<N>& a) {
    return a.value() < 0.0 ? -a : a;
}

template <int N>
Jet<N> pow(const Jet<N>& a, int n) {
    if (n < 0) return 1.0 / pow(a, -n);
    Jet<N> result(1.0), base = a;
    while (n > 0) {
        if (n & 1) result = result * base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

}  // namespace gnr
