#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "hybrid4/basis.hpp"
#include "hybrid4/config.hpp"
#include "hybrid4/error.hpp"
#include "hybrid4/point4.hpp"

namespace hybrid4 {

/// Volume of the reference cubic pyramid K*; every rule's weights sum to it.
inline constexpr double reference_pyramid_volume = 2.0;

enum class OrbitType { S1, S2, S3, S4, S5, S6, S7 };

inline constexpr std::array<OrbitType, 7> all_orbit_types{OrbitType::S1, OrbitType::S2, OrbitType::S3, OrbitType::S4,
                                                          OrbitType::S5, OrbitType::S6, OrbitType::S7};

/// Number of generator parameters, delta included.
inline constexpr int orbit_param_count(OrbitType t)
{
    constexpr std::array<int, 7> n{1, 2, 2, 2, 3, 3, 4};
    return n[static_cast<int>(t)];
}

/// Number of distinct points for generic parameters.
inline constexpr int orbit_size(OrbitType t)
{
    constexpr std::array<int, 7> n{1, 6, 8, 12, 24, 24, 48};
    return n[static_cast<int>(t)];
}

inline std::string orbit_name(OrbitType t)
{
    return "S" + std::to_string(static_cast<int>(t) + 1);
}

/// A symmetry orbit of K*. params holds the spatial parameters (alpha, beta,
/// gamma as needed) followed by delta, the x4 coordinate.
struct SymmetryOrbit {
    OrbitType type = OrbitType::S1;
    std::vector<double> params;
    double weight = 0.0;

    double delta() const { return params.back(); }
};

/// Spatial generator (x1, x2, x3) of an orbit before signed permutation.
template <class T>
std::array<T, 3> orbit_generator(OrbitType type, const T* p)
{
    const T zero(0.0);
    switch (type) {
    case OrbitType::S1: return {zero, zero, zero};
    case OrbitType::S2: return {p[0], zero, zero};
    case OrbitType::S3: return {p[0], p[0], p[0]};
    case OrbitType::S4: return {p[0], p[0], zero};
    case OrbitType::S5: return {p[0], p[1], zero};
    case OrbitType::S6: return {p[0], p[0], p[1]};
    case OrbitType::S7: return {p[0], p[1], p[2]};
    }
    return {zero, zero, zero};
}

/// The 48 signed permutations of three coordinates: (perm, sign bits).
struct SignedPermutation {
    std::array<int, 3> perm;
    std::array<int, 3> sign;
};

inline const std::array<SignedPermutation, 48>& signed_permutations()
{
    static const std::array<SignedPermutation, 48> table = [] {
        std::array<SignedPermutation, 48> t{};
        std::array<int, 3> perm{0, 1, 2};
        std::size_t n = 0;
        do {
            for (int s = 0; s < 8; ++s)
                t[n++] = {perm, {(s & 1) ? -1 : 1, (s & 2) ? -1 : 1, (s & 4) ? -1 : 1}};
        } while (std::next_permutation(perm.begin(), perm.end()));
        return t;
    }();
    return table;
}

inline void check_orbit(const SymmetryOrbit& o)
{
    if (static_cast<int>(o.params.size()) != orbit_param_count(o.type))
        throw Error(ErrorCode::ConstraintViolation, orbit_name(o.type) + " expects "
                                                        + std::to_string(orbit_param_count(o.type)) + " parameters");
    const double delta = o.delta();
    if (!(delta > -1.0 && delta < 0.0))
        throw Error(ErrorCode::ConstraintViolation, "delta must lie in (-1, 0)");
    for (std::size_t i = 0; i + 1 < o.params.size(); ++i) {
        const double a = o.params[i];
        // Abscissae must be strictly inside K*, so a = -delta is rejected too.
        if (!(a > 0.0 && a < -delta))
            throw Error(ErrorCode::ConstraintViolation, "spatial parameters must lie in (0, -delta)");
    }
}

/// All unique signed permutations of the generator over x1..x3; x4 = delta.
inline std::vector<Point4> expand_orbit(const SymmetryOrbit& o)
{
    check_orbit(o);
    const auto g = orbit_generator<double>(o.type, o.params.data());
    std::vector<Point4> pts;
    pts.reserve(48);
    for (const auto& sp : signed_permutations()) {
        Point4 p;
        for (int c = 0; c < 3; ++c) {
            const double v = sp.sign[c] * g[sp.perm[c]];
            p[c] = (v == 0.0) ? 0.0 : v;
        }
        p[3] = o.delta();
        if (std::find(pts.begin(), pts.end(), p) == pts.end())
            pts.push_back(p);
    }
    return pts;
}

/// Symmetric quadrature rule on K*.
class QuadratureRule {
public:
    QuadratureRule() = default;

    QuadratureRule(int strength, std::vector<SymmetryOrbit> orbits) : strength_(strength), orbits_(std::move(orbits))
    {
        if (orbits_.empty())
            throw Error(ErrorCode::ConstraintViolation, "a rule needs at least one orbit");
        for (const auto& o : orbits_) {
            if (!(o.weight > 0.0) || !std::isfinite(o.weight))
                throw Error(ErrorCode::ConstraintViolation, "orbit weights must be positive");
            for (const auto& p : expand_orbit(o)) {
                points_.push_back(p);
                weights_.push_back(o.weight);
            }
        }
    }

    int strength() const { return strength_; }
    const std::vector<SymmetryOrbit>& orbits() const { return orbits_; }
    const std::vector<Point4>& points() const { return points_; }
    const std::vector<double>& weights() const { return weights_; }
    std::size_t size() const { return points_.size(); }

    double weight_sum() const
    {
        double s = 0.0;
        for (double w : weights_)
            s += w;
        return s;
    }

private:
    int strength_ = 0;
    std::vector<SymmetryOrbit> orbits_;
    std::vector<Point4> points_;
    std::vector<double> weights_;
};

/// Strict interiority of a point in K*.
inline bool strictly_inside_pyramid(const Point4& x)
{
    const double h = -x[3];
    return x[3] > -1.0 && x[3] < 0.0 && std::abs(x[0]) < h && std::abs(x[1]) < h && std::abs(x[2]) < h;
}

// ---------------------------------------------------------------------------
// Rule files
//
//   strength <p>
//   S<k> <param...> <weight>
//
// Numbers are written with 36 significant digits; the reader accepts any
// strtod-compatible value. Blank lines and lines starting with '#' are
// ignored.

inline std::string format_real(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.35e", v);
    return buf;
}

inline std::string save_rule(const QuadratureRule& rule)
{
    std::ostringstream os;
    os << "strength " << rule.strength() << '\n';
    for (const auto& o : rule.orbits()) {
        os << orbit_name(o.type);
        for (double p : o.params)
            os << ' ' << format_real(p);
        os << ' ' << format_real(o.weight) << '\n';
    }
    return os.str();
}

inline QuadratureRule load_rule(const std::string& text)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    int strength = -1;
    std::vector<SymmetryOrbit> orbits;
    auto fail = [&](const std::string& msg) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + msg);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string head;
        if (!(ls >> head) || head[0] == '#')
            continue;
        if (head == "strength") {
            if (strength >= 0)
                fail("duplicate strength line");
            if (!(ls >> strength) || strength < 0)
                fail("bad strength value");
            continue;
        }
        if (strength < 0)
            fail("expected 'strength <p>' before the first orbit");
        if (head.size() != 2 || head[0] != 'S' || head[1] < '1' || head[1] > '7')
            fail("unknown orbit type '" + head + "'");
        SymmetryOrbit o;
        o.type = static_cast<OrbitType>(head[1] - '1');
        std::vector<double> vals;
        std::string tok;
        while (ls >> tok) {
            char* end = nullptr;
            const double v = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                fail("malformed number '" + tok + "'");
            vals.push_back(v);
        }
        if (static_cast<int>(vals.size()) != orbit_param_count(o.type) + 1)
            fail(head + " expects " + std::to_string(orbit_param_count(o.type)) + " parameters and a weight");
        o.weight = vals.back();
        vals.pop_back();
        o.params = std::move(vals);
        try {
            check_orbit(o);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConstraintViolation, "line " + std::to_string(lineno) + ": " + e.what());
        }
        orbits.push_back(std::move(o));
    }
    if (strength < 0)
        fail("missing strength line");
    if (orbits.empty())
        fail("rule has no orbits");
    return QuadratureRule(strength, std::move(orbits));
}

// ---------------------------------------------------------------------------
// Moment verification

struct StrengthReport {
    int strength = 0;
    double weight_sum_error = 0.0;
    double max_residual = 0.0; // over the modes of Xi(p)
    BasisIndex worst_mode{};
    bool pass = false;
};

/// Checks sum_j w_j psi(x_j) = 0 for every psi in Xi(p) and sum w_j = 2.
inline StrengthReport verify_strength(const QuadratureRule& rule, int p, double tol = default_tolerances.moment)
{
    StrengthReport rep;
    rep.strength = p;
    rep.weight_sum_error = std::abs(rule.weight_sum() - reference_pyramid_volume);
    const auto modes = enumerate_Xi(p);
    std::vector<double> acc(modes.size(), 0.0);
    PyramidBasis<double> basis(std::max(p, 0));
    for (std::size_t n = 0; n < rule.size(); ++n) {
        basis.set_point(rule.points()[n]);
        const double w = rule.weights()[n];
        for (std::size_t m = 0; m < modes.size(); ++m)
            acc[m] += w * basis(modes[m]);
    }
    for (std::size_t m = 0; m < modes.size(); ++m)
        if (std::abs(acc[m]) > rep.max_residual) {
            rep.max_residual = std::abs(acc[m]);
            rep.worst_mode = modes[m];
        }
    rep.pass = rep.max_residual <= tol && rep.weight_sum_error <= tol;
    return rep;
}

template <class F>
double integrate_reference(const QuadratureRule& rule, F&& f)
{
    double s = 0.0;
    for (std::size_t n = 0; n < rule.size(); ++n)
        s += rule.weights()[n] * f(rule.points()[n]);
    return s;
}

/// Exact integral of x1^r x2^s x3^t x4^v over K*.
inline double pyramid_monomial_integral(int r, int s, int t, int v)
{
    if (r % 2 || s % 2 || t % 2)
        return 0.0;
    const double sign = (v % 2) ? -1.0 : 1.0;
    return 8.0 * sign / ((1.0 + r) * (1.0 + s) * (1.0 + t) * (r + s + t + v + 4.0));
}

} // namespace hybrid4
