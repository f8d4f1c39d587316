#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "hybrid4/error.hpp"
#include "hybrid4/gauss.hpp"
#include "hybrid4/integrate.hpp"
#include "hybrid4/mesh.hpp"
#include "hybrid4/quadrature.hpp"

namespace hybrid4 {

// ---------------------------------------------------------------------------
// Rule lookup

/// rules/pNN.txt under dir.
inline std::filesystem::path rule_path(const std::filesystem::path& dir, int p)
{
    char name[16];
    std::snprintf(name, sizeof name, "p%02d.txt", p);
    return dir / name;
}

inline QuadratureRule load_rule_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::UnknownRule, "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return load_rule(ss.str());
}

inline QuadratureRule load_shipped_rule(const std::filesystem::path& dir, int p)
{
    const auto path = rule_path(dir, p);
    if (!std::filesystem::exists(path))
        throw Error(ErrorCode::UnknownRule, "no rule of strength " + std::to_string(p) + " in " + dir.string());
    return load_rule_file(path);
}

// ---------------------------------------------------------------------------
// Polynomial experiment

inline double fpoly_coefficient(int r, int s, int t, int v, int m)
{
    return 24.0 * (r + 1) * (s + 1) * (t + 1) * (v + 1) / ((m + 1.0) * (m + 2.0) * (m + 3.0) * (m + 4.0));
}

/// Sum of C_rstv x^r y^s z^t w^v over r + s + t + v <= m.
inline double fpoly(const Point4& x, int m)
{
    if (m < 0)
        throw Error(ErrorCode::InvalidParams, "degree must be non-negative");
    std::vector<std::array<double, 4>> pw(static_cast<std::size_t>(m + 1));
    for (std::size_t d = 0; d < 4; ++d) {
        double a = 1.0;
        for (int k = 0; k <= m; ++k) {
            pw[static_cast<std::size_t>(k)][d] = a;
            a *= x[d];
        }
    }
    double s = 0.0;
    for (int r = 0; r <= m; ++r)
        for (int q = 0; q <= m - r; ++q)
            for (int t = 0; t <= m - r - q; ++t)
                for (int v = 0; v <= m - r - q - t; ++v)
                    s += fpoly_coefficient(r, q, t, v, m) * pw[static_cast<std::size_t>(r)][0] *
                         pw[static_cast<std::size_t>(q)][1] * pw[static_cast<std::size_t>(t)][2] *
                         pw[static_cast<std::size_t>(v)][3];
    return s;
}

/// J_inf: the exact integral of fpoly(., m) over K*.
inline double fpoly_exact(int m)
{
    if (m < 0)
        throw Error(ErrorCode::InvalidParams, "degree must be non-negative");
    double s = 0.0;
    for (int r = 0; r <= m; ++r)
        for (int q = 0; q <= m - r; ++q)
            for (int t = 0; t <= m - r - q; ++t)
                for (int v = 0; v <= m - r - q - t; ++v)
                    s += fpoly_coefficient(r, q, t, v, m) * pyramid_monomial_integral(r, q, t, v);
    return s;
}

struct FpolyRow {
    int m = 0;
    int p = 0;
    double jp = 0.0;
    double jinf = 0.0;
    double error() const { return std::abs(jp - jinf); }
};

inline FpolyRow cmd_fpoly(const QuadratureRule& rule, int m)
{
    FpolyRow row;
    row.m = m;
    row.p = rule.strength();
    row.jp = integrate_reference(rule, [m](const Point4& x) { return fpoly(x, m); });
    row.jinf = fpoly_exact(m);
    return row;
}

// ---------------------------------------------------------------------------
// Transcendental experiment on [0,1]^4

enum class TestFunction { F1, F2, F3, One };

inline TestFunction parse_function(const std::string& s)
{
    if (s == "f1")
        return TestFunction::F1;
    if (s == "f2")
        return TestFunction::F2;
    if (s == "f3")
        return TestFunction::F3;
    if (s == "one" || s == "1")
        return TestFunction::One;
    throw Error(ErrorCode::UnknownFunction, "unknown function '" + s + "'");
}

inline const char* function_name(TestFunction f)
{
    switch (f) {
    case TestFunction::F1: return "f1";
    case TestFunction::F2: return "f2";
    case TestFunction::F3: return "f3";
    case TestFunction::One: return "one";
    }
    return "?";
}

inline Integrand integrand(TestFunction f)
{
    switch (f) {
    case TestFunction::F1:
        return [](const Point4& x) {
            constexpr double pi = std::numbers::pi;
            return std::sin(pi * x[0] * x[0]) * std::sin(pi * x[1] * x[1]) * std::sin(pi * x[2] * x[2]) *
                   std::sin(pi * x[3] * x[3]);
        };
    case TestFunction::F2:
        return [](const Point4& x) { return std::exp(x[0] * x[0] + x[1] * x[1] + x[2] * x[2] + x[3] * x[3]); };
    case TestFunction::F3:
        return [](const Point4& x) { return std::exp(x[0] + x[1] / 2 + x[2] / 3 + x[3] / 4); };
    case TestFunction::One: return [](const Point4&) { return 1.0; };
    }
    throw Error(ErrorCode::UnknownFunction, "unknown function");
}

/// (e - 1) 2(e^{1/2} - 1) 3(e^{1/3} - 1) 4(e^{1/4} - 1).
inline double f3_exact()
{
    double v = 1.0;
    for (int k = 1; k <= 4; ++k)
        v *= k * std::expm1(1.0 / k);
    return v;
}

struct OracleResult {
    double value = 0.0;
    double check = 0.0; // same rule on the finer grid
    double disagreement() const { return std::abs(value - check); }
};

/// Tensor Gauss-Legendre with `nodes` points per axis on each cell of an
/// m_ref^4 grid of [0,1]^4. Separable integrands would allow a product of 1D
/// sums, but the oracle deliberately treats f as a black box.
inline double tensor_gauss_unit_box(const Integrand& f, int m_ref, int nodes)
{
    const Rule1D g = gauss_legendre(nodes, 0.0, 1.0 / m_ref);
    std::vector<double> x, w;
    for (int c = 0; c < m_ref; ++c)
        for (std::size_t i = 0; i < g.nodes.size(); ++i) {
            x.push_back(g.nodes[i] + static_cast<double>(c) / m_ref);
            w.push_back(g.weights[i]);
        }
    const std::size_t n = x.size();
    std::vector<double> outer(n);
    std::vector<double> inner(n);
    for (std::size_t a = 0; a < n; ++a) {
        std::vector<double> mid(n);
        for (std::size_t b = 0; b < n; ++b) {
            for (std::size_t c = 0; c < n; ++c) {
                CompensatedSum s;
                for (std::size_t d = 0; d < n; ++d)
                    s.add(w[d] * f({x[a], x[b], x[c], x[d]}));
                inner[c] = w[c] * s.value();
            }
            mid[b] = w[b] * pairwise_sum(inner);
        }
        outer[a] = w[a] * pairwise_sum(mid);
    }
    return pairwise_sum(outer);
}

/// Reference value of f over [0,1]^4: 20-point Gauss-Legendre per axis on
/// an M_ref = 4 grid, cross-checked at M_ref = 6.
inline OracleResult cmd_oracle(const Integrand& f, double agree_tol = 1e-13, int nodes = 20)
{
    OracleResult r;
    r.value = tensor_gauss_unit_box(f, 4, nodes);
    r.check = tensor_gauss_unit_box(f, 6, nodes);
    if (!(r.disagreement() <= agree_tol * std::max(1.0, std::abs(r.value))))
        throw Error(ErrorCode::OracleDisagreement, "M_ref = 4 and 6 differ by " + std::to_string(r.disagreement()));
    return r;
}

/// Pyramid mesh: M^4 tesseracts on [0,1]^4, each split by B.
inline Mesh pyramid_mesh(int m)
{
    if (m < 1)
        throw Error(ErrorCode::InvalidParams, "M must be at least 1");
    return hybridize(mesh_canonical_box(m), [](const Point4&) { return true; });
}

struct ConvergenceRow {
    int m = 0;
    int p = 0;
    double jp = 0.0;
    double jref = 0.0;
    double error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN(); // against the previous M
};

/// Errors of J_p on pyramid meshes M = ms[0], ms[1], ... against jref. The
/// observed order between successive meshes is
/// log(e_prev / e) / log(M / M_prev), the log2 ratio when M doubles.
inline std::vector<ConvergenceRow> cmd_convergence(const Integrand& f, double jref, const QuadratureRule& rule,
                                                   const std::vector<int>& ms, int threads = 1)
{
    std::vector<ConvergenceRow> rows;
    for (int m : ms) {
        const Mesh mesh = pyramid_mesh(m);
        ConvergenceRow row;
        row.m = m;
        row.p = rule.strength();
        row.jp = integrate_mesh(mesh, rule, f, {.threads = threads});
        row.jref = jref;
        row.error = std::abs(row.jp - jref);
        if (!rows.empty() && rows.back().error > 0.0 && row.error > 0.0)
            row.order = std::log(rows.back().error / row.error) / std::log(static_cast<double>(m) / rows.back().m);
        rows.push_back(row);
    }
    return rows;
}

} // namespace hybrid4
