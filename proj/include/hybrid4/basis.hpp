#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "hybrid4/jacobi.hpp"
#include "hybrid4/point4.hpp"

namespace hybrid4 {

/// Multi-index (i, j, k, q) of one orthonormal mode.
struct BasisIndex {
    int i = 0, j = 0, k = 0, q = 0;

    constexpr int degree() const { return i + j + k + q; }
    friend constexpr bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// All modes with 0 < i+j+k+q <= p, graded then lexicographic in (i, j, k, q).
inline std::vector<BasisIndex> enumerate_Xi(int p)
{
    std::vector<BasisIndex> out;
    for (int deg = 1; deg <= p; ++deg)
        for (int i = 0; i <= deg; ++i)
            for (int j = 0; i + j <= deg; ++j)
                for (int k = 0; i + j + k <= deg; ++k)
                    out.push_back({i, j, k, deg - i - j - k});
    return out;
}

/// Modes with degree <= p including the constant, same ordering.
inline std::vector<BasisIndex> enumerate_modes(int p)
{
    std::vector<BasisIndex> out{{0, 0, 0, 0}};
    const auto rest = enumerate_Xi(p);
    out.insert(out.end(), rest.begin(), rest.end());
    return out;
}

// ---------------------------------------------------------------------------
// Tesseract T* = [-1, 1]^4

template <class T>
T eval_basis_tesseract(const BasisIndex& idx, const BasicPoint4<T>& x)
{
    return jacobi_orthonormal<T>({idx.i, 0.0, 0.0}, x[0]) * jacobi_orthonormal<T>({idx.j, 0.0, 0.0}, x[1])
           * jacobi_orthonormal<T>({idx.k, 0.0, 0.0}, x[2]) * jacobi_orthonormal<T>({idx.q, 0.0, 0.0}, x[3]);
}

// ---------------------------------------------------------------------------
// Cubic pyramid K*: base x4 = -1, apex at the origin.
//
// psi_ijkq = sqrt(2^(mu+1)) P_i(a) P_j(b) P_k(c) P_q^(mu,0)(2 x4 + 1) (-x4)^(i+j+k)
// with a = -x1/x4 etc. and mu = 2(i+j+k) + 3. The factor (-x4)^n is folded
// into each Legendre term, which turns P_n(x1 / (-x4)) (-x4)^n into a
// homogeneous polynomial in (x1, -x4).

inline double pyramid_scale(int ijk)
{
    return std::sqrt(std::ldexp(1.0, 2 * ijk + 4));
}

/// Batch evaluator for pyramid modes up to a fixed total degree; reuses the
/// one-dimensional tables across modes.
template <class T>
class PyramidBasis {
public:
    explicit PyramidBasis(int max_degree)
        : p_(max_degree), legendre_(3 * static_cast<std::size_t>(p_ + 1)),
          radial_(static_cast<std::size_t>(p_ + 1) * static_cast<std::size_t>(p_ + 1)),
          legendre_norm_(static_cast<std::size_t>(p_ + 1)), radial_norm_(radial_.size())
    {
        const std::size_t n = static_cast<std::size_t>(p_ + 1);
        for (int m = 0; m <= p_; ++m)
            legendre_norm_[static_cast<std::size_t>(m)] = jacobi_inverse_norm(m, 0.0, 0.0);
        for (int s = 0; s <= p_; ++s)
            for (int q = 0; q + s <= p_; ++q)
                radial_norm_[static_cast<std::size_t>(s) * n + static_cast<std::size_t>(q)] =
                    pyramid_scale(s) * jacobi_inverse_norm(q, 2.0 * s + 3.0, 0.0);
    }

    int max_degree() const { return p_; }

    void set_point(const BasicPoint4<T>& x)
    {
        const T t = T(0.0) - x[3];
        const std::size_t n = static_cast<std::size_t>(p_ + 1);
        for (std::size_t c = 0; c < 3; ++c) {
            jacobi_homogeneous(0.0, 0.0, x[c], t, std::span<T>(legendre_.data() + c * n, n));
            for (std::size_t m = 0; m < n; ++m)
                legendre_[c * n + m] = legendre_norm_[m] * legendre_[c * n + m];
        }
        const T d = 2.0 * x[3] + 1.0;
        for (int s = 0; s <= p_; ++s) {
            const std::size_t len = static_cast<std::size_t>(p_ - s + 1);
            T* row = radial_.data() + static_cast<std::size_t>(s) * n;
            jacobi_homogeneous(2.0 * s + 3.0, 0.0, d, T(1.0), std::span<T>(row, len));
            for (std::size_t q = 0; q < len; ++q)
                row[q] = radial_norm_[static_cast<std::size_t>(s) * n + q] * row[q];
        }
    }

    /// Value of one mode at the current point; idx.degree() <= max_degree().
    T operator()(const BasisIndex& idx) const
    {
        const std::size_t n = static_cast<std::size_t>(p_ + 1);
        const int s = idx.i + idx.j + idx.k;
        return legendre_[idx.i] * legendre_[n + idx.j] * legendre_[2 * n + idx.k]
               * radial_[static_cast<std::size_t>(s) * n + idx.q];
    }

private:
    int p_;
    std::vector<T> legendre_;
    std::vector<T> radial_;
    std::vector<double> legendre_norm_;
    std::vector<double> radial_norm_; // includes the pyramid scale
};

template <class T>
T eval_basis_cubic_pyramid(const BasisIndex& idx, const BasicPoint4<T>& x)
{
    PyramidBasis<T> b(idx.degree());
    b.set_point(x);
    return b(idx);
}

// ---------------------------------------------------------------------------
// Standard pentatope S* with vertices (1,-1,-1,-1), ..., (-1,-1,-1,-1).
//
// Collapsed coordinates a, b, c, d are never formed: with
//   D_a = -(1 + x2 + x3 + x4), D_b = -(x3 + x4), D_c = 1 - x4
// the blended products reduce to
//   P_i(a) (1-b)^i (1-c)^i (1-d)^i = 4^i D_a^i P_i(a)
//   P_j(b) (1-c)^j (1-d)^j         = 2^j D_b^j P_j(b)
//   P_k(c) (1-d)^k                 = D_c^k P_k(c)
// which are homogeneous Jacobi polynomials.

/// Leading constant of the pentatope modes. The value that makes the modes
/// orthonormal on S* with the blending factors above is 8.
inline constexpr double pentatope_leading_constant = 8.0;

template <class T>
T eval_basis_pentatope(const BasisIndex& idx, const BasicPoint4<T>& x)
{
    const T da = T(0.0) - (1.0 + x[1] + x[2] + x[3]);
    const T db = T(0.0) - (x[2] + x[3]);
    const T dc = 1.0 - x[3];

    std::vector<T> buf(static_cast<std::size_t>(idx.degree()) + 1);
    auto last = [&](std::size_t n) { return buf[n]; };

    jacobi_homogeneous_normalized(0.0, 0.0, T(2.0 * (1.0 + x[0])) - da, da,
                                  std::span<T>(buf.data(), static_cast<std::size_t>(idx.i) + 1));
    T result = std::ldexp(1.0, 2 * idx.i) * last(idx.i);

    jacobi_homogeneous_normalized(2.0 * idx.i + 1.0, 0.0, T(2.0 * (1.0 + x[1])) - db, db,
                                  std::span<T>(buf.data(), static_cast<std::size_t>(idx.j) + 1));
    result = result * (std::ldexp(1.0, idx.j) * last(idx.j));

    jacobi_homogeneous_normalized(2.0 * (idx.i + idx.j) + 2.0, 0.0, T(2.0 * (1.0 + x[2])) - dc, dc,
                                  std::span<T>(buf.data(), static_cast<std::size_t>(idx.k) + 1));
    result = result * last(idx.k);

    jacobi_homogeneous_normalized(2.0 * (idx.i + idx.j + idx.k) + 3.0, 0.0, x[3], T(1.0),
                                  std::span<T>(buf.data(), static_cast<std::size_t>(idx.q) + 1));
    return pentatope_leading_constant * result * last(idx.q);
}

} // namespace hybrid4
