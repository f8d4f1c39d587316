#pragma once

// Pyramid-mesh convergence in binary128 arithmetic (GCC __float128). Only
// rules with a closed-form construction can be regenerated at this
// precision: the conical product rules. The test functions and their
// reference values are rebuilt here from series and closed forms.

#include <quadmath.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hybrid4/experiments.hpp"
#include "hybrid4/gauss.hpp"

namespace quadconv {

__extension__ typedef __float128 quad;

struct Rule {
    std::vector<std::array<quad, 4>> x;
    std::vector<quad> w;
};

/// Gauss-Jacobi for (1-x)^a (1+x)^b with integer a, b. The double nodes of
/// the library seed Newton on the orthonormal recurrence; weights are the
/// Christoffel numbers 1 / sum_k phat_k(x)^2.
inline std::pair<std::vector<quad>, std::vector<quad>> gauss_jacobi(int n, int a, int b)
{
    const quad al = a, be = b, apb = al + be;
    std::vector<quad> diag(static_cast<std::size_t>(n)), off(static_cast<std::size_t>(n + 1), 0);
    for (int k = 0; k < n; ++k) {
        const quad den = (2 * k + apb) * (2 * k + apb + 2);
        diag[static_cast<std::size_t>(k)] = den == 0 ? (be - al) / (apb + 2) : (be * be - al * al) / den;
        const quad k1 = k + 1;
        const quad num = 4 * k1 * (k1 + al) * (k1 + be) * (k1 + apb);
        const quad d2 = (2 * k1 + apb) * (2 * k1 + apb) * (2 * k1 + apb + 1) * (2 * k1 + apb - 1);
        off[static_cast<std::size_t>(k + 1)] = sqrtq(num / d2);
    }
    // mu0 = 2^(a+b+1) a! b! / (a+b+1)!
    quad mu0 = powq(2, apb + 1);
    for (int i = 2; i <= a; ++i)
        mu0 *= i;
    for (int i = 2; i <= b; ++i)
        mu0 *= i;
    for (int i = 2; i <= a + b + 1; ++i)
        mu0 /= i;

    // phat_n(x), its derivative and sum_{k<n} phat_k(x)^2.
    auto eval = [&](quad x, quad& p, quad& dp, quad& s) {
        quad p0 = 0, p1 = 1 / sqrtq(mu0), d0 = 0, d1 = 0;
        s = 0;
        for (int k = 0; k < n; ++k) {
            s += p1 * p1;
            const quad c = off[static_cast<std::size_t>(k + 1)], cm = off[static_cast<std::size_t>(k)];
            const quad d = diag[static_cast<std::size_t>(k)];
            const quad p2 = ((x - d) * p1 - cm * p0) / c;
            const quad d2 = (p1 + (x - d) * d1 - cm * d0) / c;
            p0 = p1;
            p1 = p2;
            d0 = d1;
            d1 = d2;
        }
        p = p1;
        dp = d1;
    };

    const auto seed = hybrid4::gauss_jacobi(n, a, b);
    std::vector<quad> x(static_cast<std::size_t>(n)), w(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        quad xi = seed.nodes[static_cast<std::size_t>(i)], p, dp, s;
        for (int it = 0; it < 10; ++it) {
            eval(xi, p, dp, s);
            xi -= p / dp;
        }
        eval(xi, p, dp, s);
        x[static_cast<std::size_t>(i)] = xi;
        w[static_cast<std::size_t>(i)] = 1 / s;
    }
    return {x, w};
}

/// Same construction as hybrid4::conical_product_rule, fully expanded.
inline Rule conical_product(int p)
{
    const int n = std::max(1, (p + 2) / 2);
    const auto [tj, wj] = gauss_jacobi(n, 0, 3);
    const auto [s, ws] = gauss_jacobi(n, 0, 0);
    Rule r;
    for (std::size_t k = 0; k < tj.size(); ++k) {
        const quad t = (1 + tj[k]) / 2;
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = 0; b < s.size(); ++b)
                for (std::size_t c = 0; c < s.size(); ++c) {
                    r.x.push_back({t * s[a], t * s[b], t * s[c], -t});
                    r.w.push_back(wj[k] / 16 * ws[a] * ws[b] * ws[c]);
                }
    }
    return r;
}

inline quad eval(hybrid4::TestFunction f, const std::array<quad, 4>& x)
{
    using hybrid4::TestFunction;
    switch (f) {
    case TestFunction::F1:
        return sinq(M_PIq * x[0] * x[0]) * sinq(M_PIq * x[1] * x[1]) * sinq(M_PIq * x[2] * x[2]) *
               sinq(M_PIq * x[3] * x[3]);
    case TestFunction::F2: return expq(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]);
    case TestFunction::F3: return expq(x[0] + x[1] / 2 + x[2] / 3 + x[3] / 4);
    case TestFunction::One: return 1;
    }
    throw std::invalid_argument("unknown function");
}

/// Integral over [0,1]^4 from one-dimensional series.
inline quad reference(hybrid4::TestFunction f)
{
    using hybrid4::TestFunction;
    switch (f) {
    case TestFunction::F1: {
        // int_0^1 sin(pi x^2) = sum (-1)^k pi^(2k+1) / ((2k+1)! (4k+3))
        quad s = 0, term = M_PIq;
        for (int k = 0; k < 60; ++k) {
            s += term / (4 * k + 3);
            term *= -M_PIq * M_PIq / ((2 * k + 2) * (2 * k + 3));
        }
        return s * s * s * s;
    }
    case TestFunction::F2: {
        // int_0^1 exp(x^2) = sum 1 / (k! (2k+1))
        quad s = 0, inv_fact = 1;
        for (int k = 0; k < 60; ++k) {
            s += inv_fact / (2 * k + 1);
            inv_fact /= k + 1;
        }
        return s * s * s * s;
    }
    case TestFunction::F3: {
        quad v = 1;
        for (int k = 1; k <= 4; ++k)
            v *= k * expm1q(quad(1) / k);
        return v;
    }
    case TestFunction::One: return 1;
    }
    throw std::invalid_argument("unknown function");
}

/// The pyramids of the unit cube as reference-to-physical maps, taken from
/// the library's B split. Every entry is a multiple of 1/4 and so exact.
struct CubePyramid {
    quad a[4][4];
    quad b[4];
    quad jac;
};

inline std::vector<CubePyramid> unit_cube_pyramids()
{
    const hybrid4::Mesh m = hybrid4::pyramid_mesh(1);
    std::vector<CubePyramid> out;
    for (std::size_t e = 0; e < m.size(); ++e) {
        const auto pts = m.points_of(e);
        const auto map = hybrid4::affine_map_from_reference(m.elements[e].kind, pts);
        CubePyramid c;
        for (int r = 0; r < 4; ++r) {
            for (int k = 0; k < 4; ++k) {
                const double v = map.a(r, k);
                if (v * 4 != std::round(v * 4))
                    throw std::runtime_error("unit cube pyramid map is not dyadic");
                c.a[r][k] = v;
            }
            c.b[r] = map.b[static_cast<std::size_t>(r)];
        }
        c.jac = map.jacobian();
        out.push_back(c);
    }
    return out;
}

/// J_p on the M^4 pyramid mesh: each cube [c, c+1]/M carries the unit cube
/// pyramids scaled by 1/M.
inline quad integrate(const Rule& rule, hybrid4::TestFunction f, int m, const std::vector<CubePyramid>& cube)
{
    // Rule points on the unit cube pyramids, weights times the Jacobian.
    std::vector<std::array<quad, 4>> y;
    std::vector<quad> wy;
    for (const auto& c : cube)
        for (std::size_t i = 0; i < rule.x.size(); ++i) {
            std::array<quad, 4> p;
            for (int r = 0; r < 4; ++r) {
                p[r] = c.b[r];
                for (int k = 0; k < 4; ++k)
                    p[r] += c.a[r][k] * rule.x[i][k];
            }
            y.push_back(p);
            wy.push_back(rule.w[i] * c.jac);
        }
    const quad h = quad(1) / m;
    quad total = 0;
    for (int c0 = 0; c0 < m; ++c0)
        for (int c1 = 0; c1 < m; ++c1)
            for (int c2 = 0; c2 < m; ++c2)
                for (int c3 = 0; c3 < m; ++c3) {
                    quad cell = 0;
                    for (std::size_t i = 0; i < y.size(); ++i)
                        cell += wy[i] * eval(f, {(y[i][0] + c0) * h, (y[i][1] + c1) * h, (y[i][2] + c2) * h,
                                                 (y[i][3] + c3) * h});
                    total += cell;
                }
    return total * h * h * h * h;
}

} // namespace quadconv
