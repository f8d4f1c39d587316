#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <thread>
#include <vector>

#include "hybrid4/elements.hpp"
#include "hybrid4/error.hpp"
#include "hybrid4/gauss.hpp"
#include "hybrid4/geometry.hpp"
#include "hybrid4/mesh.hpp"
#include "hybrid4/point4.hpp"
#include "hybrid4/quadrature.hpp"

namespace hybrid4 {

using Integrand = std::function<double(const Point4&)>;

/// Explicit point/weight list on a physical element.
struct PointRule {
    std::vector<Point4> points;
    std::vector<double> weights;

    double apply(const Integrand& f) const
    {
        double s = 0.0;
        for (std::size_t i = 0; i < points.size(); ++i)
            s += weights[i] * f(points[i]);
        return s;
    }
    double weight_sum() const
    {
        double s = 0.0;
        for (double w : weights)
            s += w;
        return s;
    }
};

/// Affine map x = b + A xi taking the reference element of `kind` onto the
/// element with vertices pts, vertex by vertex.
struct AffineMap {
    Matrix4 a = Matrix4::identity();
    Point4 b{};

    Point4 operator()(const Point4& xi) const { return b + a * xi; }
    double jacobian() const { return std::abs(determinant(a)); }
};

inline AffineMap affine_map_from_reference(ElementKind kind, std::span<const Point4> pts,
                                           const Tolerances& tol = default_tolerances)
{
    const auto& ref = reference_vertices(kind);
    if (pts.size() != ref.size())
        throw Error(ErrorCode::KindMismatch, "vertex count does not match the element kind");
    std::vector<Point4> chosen;
    std::vector<int> frame;
    for (std::size_t i = 0; i < ref.size() && frame.size() < 5; ++i) {
        chosen.push_back(ref[i]);
        if (affine_dimension(chosen) == static_cast<int>(frame.size()))
            frame.push_back(static_cast<int>(i));
        else
            chosen.pop_back();
    }
    auto col = [](std::span<const Point4> p, const std::vector<int>& f, std::size_t c) {
        return p[static_cast<std::size_t>(f[c + 1])] - p[static_cast<std::size_t>(f[0])];
    };
    const std::span<const Point4> r(ref);
    const Matrix4 mr = from_columns(col(r, frame, 0), col(r, frame, 1), col(r, frame, 2), col(r, frame, 3));
    const Matrix4 me = from_columns(col(pts, frame, 0), col(pts, frame, 1), col(pts, frame, 2), col(pts, frame, 3));
    Matrix4 mr_inv;
    if (!invert(mr, mr_inv))
        throw Error(ErrorCode::DegenerateElement, "reference frame is singular");
    AffineMap m;
    m.a = me * mr_inv;
    m.b = pts[static_cast<std::size_t>(frame[0])] - m.a * ref[static_cast<std::size_t>(frame[0])];
    if (!(m.jacobian() > tol.vol))
        throw Error(ErrorCode::DegenerateElement, "element is degenerate");
    const double h = diameter(pts);
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (distance(m(ref[i]), pts[i]) > tol.geom * h)
            throw Error(ErrorCode::InvalidParams, "element is not an affine image of its reference element");
    return m;
}

/// The pyramid rule carried onto a physical cubic pyramid. Weights scale by
/// |det J| = vol(e) / vol(K*).
inline PointRule map_rule_to_element(const QuadratureRule& rule, const Element& e, std::span<const Point4> pool)
{
    if (e.kind != ElementKind::CubicPyramid)
        throw Error(ErrorCode::KindMismatch, std::string("pyramid rules do not apply to a ") + kind_name(e.kind));
    const auto pts = element_points(e, pool);
    const AffineMap m = affine_map_from_reference(e.kind, pts);
    const double jac = m.jacobian();
    PointRule out;
    out.points.reserve(rule.size());
    out.weights.reserve(rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) {
        out.points.push_back(m(rule.points()[i]));
        out.weights.push_back(rule.weights()[i] * jac);
    }
    return out;
}

/// Tensor Gauss-Legendre rule with n points per axis on T*.
inline PointRule tesseract_rule(int n)
{
    const Rule1D g = gauss_legendre(n);
    PointRule r;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        for (std::size_t j = 0; j < g.nodes.size(); ++j)
            for (std::size_t k = 0; k < g.nodes.size(); ++k)
                for (std::size_t l = 0; l < g.nodes.size(); ++l) {
                    r.points.push_back({g.nodes[i], g.nodes[j], g.nodes[k], g.nodes[l]});
                    r.weights.push_back(g.weights[i] * g.weights[j] * g.weights[k] * g.weights[l]);
                }
    return r;
}

/// Collapsed-coordinate (conical product) rule on the unit simplex with
/// vertices 0, e1, ..., e4, returned in barycentric form (lambda1..lambda4)
/// with weights summing to 1/24. Exact for degree 2n - 1.
inline PointRule simplex_rule(int n)
{
    std::array<Rule1D, 4> g;
    for (int d = 0; d < 4; ++d) {
        g[static_cast<std::size_t>(d)] = gauss_jacobi(n, 3.0 - d, 0.0);
        auto& r = g[static_cast<std::size_t>(d)];
        const double scale = std::pow(0.5, 4.0 - d); // (1-x)^a dx on [-1,1] -> (1-t)^a dt on [0,1]
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            r.nodes[i] = 0.5 * (1.0 + r.nodes[i]);
            r.weights[i] *= scale;
        }
    }
    PointRule out;
    for (std::size_t a = 0; a < g[0].nodes.size(); ++a)
        for (std::size_t b = 0; b < g[1].nodes.size(); ++b)
            for (std::size_t c = 0; c < g[2].nodes.size(); ++c)
                for (std::size_t d = 0; d < g[3].nodes.size(); ++d) {
                    const double t1 = g[0].nodes[a], t2 = g[1].nodes[b], t3 = g[2].nodes[c], t4 = g[3].nodes[d];
                    const double l1 = t1;
                    const double l2 = (1 - t1) * t2;
                    const double l3 = (1 - t1) * (1 - t2) * t3;
                    const double l4 = (1 - t1) * (1 - t2) * (1 - t3) * t4;
                    out.points.push_back({l1, l2, l3, l4});
                    out.weights.push_back(g[0].weights[a] * g[1].weights[b] * g[2].weights[c] * g[3].weights[d]);
                }
    return out;
}

/// How integrate_mesh treats elements other than cubic pyramids.
struct IntegrationOptions {
    int tensor_points = 0;  // Gauss-Legendre points per axis on tesseracts; 0 picks ceil((p+1)/2)
    int simplex_points = -1; // conical product points per axis on pentatopes; <0 means unsupported
    int threads = 1;
};

namespace detail {

inline double element_integral(const Element& e, std::span<const Point4> pool, const QuadratureRule& rule,
                               const PointRule& tess, const PointRule* simplex, const Integrand& f)
{
    switch (e.kind) {
    case ElementKind::CubicPyramid: return map_rule_to_element(rule, e, pool).apply(f);
    case ElementKind::Tesseract: {
        const auto pts = element_points(e, pool);
        const AffineMap m = affine_map_from_reference(e.kind, pts);
        double s = 0.0;
        for (std::size_t i = 0; i < tess.points.size(); ++i)
            s += tess.weights[i] * f(m(tess.points[i]));
        return s * m.jacobian();
    }
    case ElementKind::Bipentatope:
    case ElementKind::Pentatope: {
        if (!simplex)
            throw Error(ErrorCode::UnsupportedElementKind,
                        std::string("no simplex rule configured for a ") + kind_name(e.kind));
        std::vector<Element> parts;
        if (e.kind == ElementKind::Bipentatope) {
            auto [u, l] = split_bipentatope(e);
            parts = {u, l};
        }
        else {
            parts = {e};
        }
        double s = 0.0;
        for (const Element& part : parts) {
            const auto p = element_points(part, pool);
            const Matrix4 a = from_columns(p[1] - p[0], p[2] - p[0], p[3] - p[0], p[4] - p[0]);
            const double jac = std::abs(determinant(a));
            for (std::size_t i = 0; i < simplex->points.size(); ++i)
                s += simplex->weights[i] * jac * f(p[0] + a * simplex->points[i]);
        }
        return s;
    }
    }
    throw Error(ErrorCode::UnknownKind, "unknown element kind");
}

} // namespace detail

/// Sum of v by a fixed binary tree, independent of how v was filled.
inline double pairwise_sum(std::span<const double> v)
{
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v)
            s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

/// J_p = sum over elements of the mapped rule applied to f. Tesseracts use
/// a tensor Gauss rule of matching strength; pentatopes and bipentatopes use
/// the conical product rule only when opts.simplex_points is set.
inline double integrate_mesh(const Mesh& mesh, const QuadratureRule& rule, const Integrand& f,
                             const IntegrationOptions& opts = {})
{
    const int nt = opts.tensor_points > 0 ? opts.tensor_points : (rule.strength() + 2) / 2;
    const PointRule tess = tesseract_rule(std::max(1, nt));
    std::optional<PointRule> simplex;
    if (opts.simplex_points > 0)
        simplex = simplex_rule(opts.simplex_points);
    const auto& pool = mesh.pool.points();
    std::vector<double> part(mesh.size());
    auto work = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            part[i] = detail::element_integral(mesh.elements[i], pool, rule, tess, simplex ? &*simplex : nullptr, f);
    };
    const std::size_t nthreads = static_cast<std::size_t>(std::max(1, opts.threads));
    if (nthreads == 1) {
        work(0, mesh.size());
    }
    else {
        std::vector<std::thread> pool_threads;
        std::vector<std::exception_ptr> errors(nthreads);
        const std::size_t chunk = (mesh.size() + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t)
            pool_threads.emplace_back([&, t] {
                try {
                    work(std::min(mesh.size(), t * chunk), std::min(mesh.size(), (t + 1) * chunk));
                }
                catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        for (auto& th : pool_threads)
            th.join();
        for (auto& e : errors)
            if (e)
                std::rethrow_exception(e);
    }
    return pairwise_sum(part);
}

} // namespace hybrid4
