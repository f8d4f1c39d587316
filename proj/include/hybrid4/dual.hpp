#pragma once

#include <array>
#include <cstddef>

namespace hybrid4 {

/// Forward-mode dual number carrying N partial derivatives. Only the
/// arithmetic needed to evaluate polynomials is provided.
template <std::size_t N>
struct Dual {
    double v = 0.0;
    std::array<double, N> d{};

    constexpr Dual() = default;
    constexpr Dual(double value) : v(value) {}

    static constexpr Dual variable(double value, std::size_t slot)
    {
        Dual r(value);
        r.d[slot] = 1.0;
        return r;
    }

    constexpr Dual& operator+=(const Dual& o)
    {
        v += o.v;
        for (std::size_t i = 0; i < N; ++i)
            d[i] += o.d[i];
        return *this;
    }
    constexpr Dual& operator-=(const Dual& o)
    {
        v -= o.v;
        for (std::size_t i = 0; i < N; ++i)
            d[i] -= o.d[i];
        return *this;
    }
    constexpr Dual& operator*=(const Dual& o)
    {
        for (std::size_t i = 0; i < N; ++i)
            d[i] = d[i] * o.v + v * o.d[i];
        v *= o.v;
        return *this;
    }
    constexpr Dual& operator*=(double s)
    {
        v *= s;
        for (auto& x : d)
            x *= s;
        return *this;
    }

    friend constexpr Dual operator+(Dual a, const Dual& b) { return a += b; }
    friend constexpr Dual operator-(Dual a, const Dual& b) { return a -= b; }
    friend constexpr Dual operator*(Dual a, const Dual& b) { return a *= b; }
    friend constexpr Dual operator*(double s, Dual a) { return a *= s; }
    friend constexpr Dual operator*(Dual a, double s) { return a *= s; }
    friend constexpr Dual operator+(Dual a, double s)
    {
        a.v += s;
        return a;
    }
    friend constexpr Dual operator+(double s, Dual a) { return a + s; }
    friend constexpr Dual operator-(Dual a, double s)
    {
        a.v -= s;
        return a;
    }
    friend constexpr Dual operator-(double s, const Dual& a) { return Dual(s) - a; }
    friend constexpr Dual operator-(Dual a)
    {
        a *= -1.0;
        return a;
    }
};

} // namespace hybrid4
