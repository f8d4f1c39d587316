#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <ostream>

namespace hybrid4 {

template <class T>
struct BasicPoint4 {
    std::array<T, 4> x{};

    constexpr BasicPoint4() = default;
    constexpr BasicPoint4(T x1, T x2, T x3, T x4) : x{x1, x2, x3, x4} {}

    constexpr T& operator[](std::size_t i) { return x[i]; }
    constexpr const T& operator[](std::size_t i) const { return x[i]; }

    constexpr BasicPoint4& operator+=(const BasicPoint4& o)
    {
        for (std::size_t i = 0; i < 4; ++i)
            x[i] += o.x[i];
        return *this;
    }
    constexpr BasicPoint4& operator-=(const BasicPoint4& o)
    {
        for (std::size_t i = 0; i < 4; ++i)
            x[i] -= o.x[i];
        return *this;
    }
    constexpr BasicPoint4& operator*=(T s)
    {
        for (auto& v : x)
            v *= s;
        return *this;
    }

    friend constexpr BasicPoint4 operator+(BasicPoint4 a, const BasicPoint4& b) { return a += b; }
    friend constexpr BasicPoint4 operator-(BasicPoint4 a, const BasicPoint4& b) { return a -= b; }
    friend constexpr BasicPoint4 operator*(T s, BasicPoint4 a) { return a *= s; }
    friend constexpr BasicPoint4 operator*(BasicPoint4 a, T s) { return a *= s; }
    friend constexpr bool operator==(const BasicPoint4&, const BasicPoint4&) = default;

    bool finite() const
    {
        for (const auto& v : x)
            if (!std::isfinite(v))
                return false;
        return true;
    }
};

using Point4 = BasicPoint4<double>;

template <class T>
T dot(const BasicPoint4<T>& a, const BasicPoint4<T>& b)
{
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

template <class T>
T norm(const BasicPoint4<T>& a)
{
    return std::sqrt(dot(a, a));
}

template <class T>
T distance(const BasicPoint4<T>& a, const BasicPoint4<T>& b)
{
    return norm(a - b);
}

/// Exact midpoint; for dyadic inputs the result is dyadic and exact.
template <class T>
BasicPoint4<T> midpoint(const BasicPoint4<T>& a, const BasicPoint4<T>& b)
{
    return T(0.5) * (a + b);
}

template <class T>
std::ostream& operator<<(std::ostream& os, const BasicPoint4<T>& p)
{
    return os << '(' << p[0] << ", " << p[1] << ", " << p[2] << ", " << p[3] << ')';
}

/// Row-major 4x4 matrix.
template <class T>
struct BasicMatrix4 {
    std::array<T, 16> a{};

    static constexpr BasicMatrix4 identity()
    {
        BasicMatrix4 m;
        for (std::size_t i = 0; i < 4; ++i)
            m(i, i) = T(1);
        return m;
    }

    constexpr T& operator()(std::size_t r, std::size_t c) { return a[r * 4 + c]; }
    constexpr const T& operator()(std::size_t r, std::size_t c) const { return a[r * 4 + c]; }

    BasicPoint4<T> operator*(const BasicPoint4<T>& v) const
    {
        BasicPoint4<T> out;
        for (std::size_t r = 0; r < 4; ++r)
            out[r] = (*this)(r, 0) * v[0] + (*this)(r, 1) * v[1] + (*this)(r, 2) * v[2] + (*this)(r, 3) * v[3];
        return out;
    }

    BasicMatrix4 operator*(const BasicMatrix4& o) const
    {
        BasicMatrix4 out;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c) {
                T s = 0;
                for (std::size_t k = 0; k < 4; ++k)
                    s += (*this)(r, k) * o(k, c);
                out(r, c) = s;
            }
        return out;
    }

    BasicMatrix4 transposed() const
    {
        BasicMatrix4 out;
        for (std::size_t r = 0; r < 4; ++r)
            for (std::size_t c = 0; c < 4; ++c)
                out(c, r) = (*this)(r, c);
        return out;
    }

    friend constexpr bool operator==(const BasicMatrix4&, const BasicMatrix4&) = default;
};

using Matrix4 = BasicMatrix4<double>;

/// max |(Q^T Q - I)_{rc}|
template <class T>
T orthogonality_defect(const BasicMatrix4<T>& q)
{
    const auto g = q.transposed() * q;
    T worst = 0;
    for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c)
            worst = std::max(worst, std::abs(g(r, c) - (r == c ? T(1) : T(0))));
    return worst;
}

/// 4x4 determinant by cofactor expansion over 2x2 minors.
template <class T>
T determinant(const BasicMatrix4<T>& m)
{
    const T s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
    const T s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2);
    const T s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3);
    const T s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2);
    const T s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3);
    const T s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3);
    const T c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3);
    const T c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3);
    const T c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2);
    const T c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3);
    const T c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2);
    const T c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1);
    return s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
}

/// Matrix whose columns are the four given vectors.
template <class T>
BasicMatrix4<T> from_columns(const BasicPoint4<T>& c0, const BasicPoint4<T>& c1, const BasicPoint4<T>& c2,
                             const BasicPoint4<T>& c3)
{
    BasicMatrix4<T> m;
    for (std::size_t r = 0; r < 4; ++r) {
        m(r, 0) = c0[r];
        m(r, 1) = c1[r];
        m(r, 2) = c2[r];
        m(r, 3) = c3[r];
    }
    return m;
}

/// Inverse via the adjugate; returns false when |det| <= tiny.
template <class T>
bool invert(const BasicMatrix4<T>& m, BasicMatrix4<T>& out, T tiny = T(0))
{
    const T s0 = m(0, 0) * m(1, 1) - m(1, 0) * m(0, 1);
    const T s1 = m(0, 0) * m(1, 2) - m(1, 0) * m(0, 2);
    const T s2 = m(0, 0) * m(1, 3) - m(1, 0) * m(0, 3);
    const T s3 = m(0, 1) * m(1, 2) - m(1, 1) * m(0, 2);
    const T s4 = m(0, 1) * m(1, 3) - m(1, 1) * m(0, 3);
    const T s5 = m(0, 2) * m(1, 3) - m(1, 2) * m(0, 3);
    const T c5 = m(2, 2) * m(3, 3) - m(3, 2) * m(2, 3);
    const T c4 = m(2, 1) * m(3, 3) - m(3, 1) * m(2, 3);
    const T c3 = m(2, 1) * m(3, 2) - m(3, 1) * m(2, 2);
    const T c2 = m(2, 0) * m(3, 3) - m(3, 0) * m(2, 3);
    const T c1 = m(2, 0) * m(3, 2) - m(3, 0) * m(2, 2);
    const T c0 = m(2, 0) * m(3, 1) - m(3, 0) * m(2, 1);
    const T det = s0 * c5 - s1 * c4 + s2 * c3 + s3 * c2 - s4 * c1 + s5 * c0;
    if (!(std::abs(det) > tiny))
        return false;
    const T inv = T(1) / det;
    out(0, 0) = (m(1, 1) * c5 - m(1, 2) * c4 + m(1, 3) * c3) * inv;
    out(0, 1) = (-m(0, 1) * c5 + m(0, 2) * c4 - m(0, 3) * c3) * inv;
    out(0, 2) = (m(3, 1) * s5 - m(3, 2) * s4 + m(3, 3) * s3) * inv;
    out(0, 3) = (-m(2, 1) * s5 + m(2, 2) * s4 - m(2, 3) * s3) * inv;
    out(1, 0) = (-m(1, 0) * c5 + m(1, 2) * c2 - m(1, 3) * c1) * inv;
    out(1, 1) = (m(0, 0) * c5 - m(0, 2) * c2 + m(0, 3) * c1) * inv;
    out(1, 2) = (-m(3, 0) * s5 + m(3, 2) * s2 - m(3, 3) * s1) * inv;
    out(1, 3) = (m(2, 0) * s5 - m(2, 2) * s2 + m(2, 3) * s1) * inv;
    out(2, 0) = (m(1, 0) * c4 - m(1, 1) * c2 + m(1, 3) * c0) * inv;
    out(2, 1) = (-m(0, 0) * c4 + m(0, 1) * c2 - m(0, 3) * c0) * inv;
    out(2, 2) = (m(3, 0) * s4 - m(3, 1) * s2 + m(3, 3) * s0) * inv;
    out(2, 3) = (-m(2, 0) * s4 + m(2, 1) * s2 - m(2, 3) * s0) * inv;
    out(3, 0) = (-m(1, 0) * c3 + m(1, 1) * c1 - m(1, 2) * c0) * inv;
    out(3, 1) = (m(0, 0) * c3 - m(0, 1) * c1 + m(0, 2) * c0) * inv;
    out(3, 2) = (-m(3, 0) * s3 + m(3, 1) * s1 - m(3, 2) * s0) * inv;
    out(3, 3) = (m(2, 0) * s3 - m(2, 1) * s1 + m(2, 2) * s0) * inv;
    return true;
}

struct Point4Hash {
    std::size_t operator()(const Point4& p) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (double v : p.x) {
            // -0.0 and 0.0 compare equal, so hash them alike.
            const double w = v == 0.0 ? 0.0 : v;
            h ^= std::hash<double>{}(w) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

} // namespace hybrid4
