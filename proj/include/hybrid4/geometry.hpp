#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "hybrid4/config.hpp"
#include "hybrid4/elements.hpp"
#include "hybrid4/point4.hpp"

namespace hybrid4 {

inline double simplex_volume4(const Point4& v0, const Point4& v1, const Point4& v2, const Point4& v3,
                              const Point4& v4)
{
    return std::abs(determinant(from_columns(v1 - v0, v2 - v0, v3 - v0, v4 - v0))) / 24.0;
}

/// 3-volume of a tetrahedron embedded in R^4: sqrt(det(E^T E)) / 6.
inline double tetrahedron_volume3(const Point4& a, const Point4& b, const Point4& c, const Point4& d)
{
    const std::array<Point4, 3> e{b - a, c - a, d - a};
    Eigen::Matrix3d g;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            g(i, j) = dot(e[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(j)]);
    return std::sqrt(std::max(0.0, g.determinant())) / 6.0;
}

/// Vertex coordinates of an element, in its own order.
inline std::vector<Point4> element_points(const Element& e, std::span<const Point4> pool)
{
    std::vector<Point4> pts;
    pts.reserve(static_cast<std::size_t>(e.size()));
    for (VertexId id : e)
        pts.push_back(pool[id]);
    return pts;
}

/// Sum of simplex volumes over the kind's fixed triangulation. The
/// determinants are summed before the division by 4! so that dyadic input
/// gives an exact result.
inline double element_volume(ElementKind kind, std::span<const Point4> pts)
{
    double v = 0.0;
    for (const auto& s : topology(kind).simplices) {
        const Point4& o = pts[static_cast<std::size_t>(s[0])];
        v += std::abs(determinant(from_columns(pts[static_cast<std::size_t>(s[1])] - o,
                                               pts[static_cast<std::size_t>(s[2])] - o,
                                               pts[static_cast<std::size_t>(s[3])] - o,
                                               pts[static_cast<std::size_t>(s[4])] - o)));
    }
    return v / 24.0;
}

inline double element_volume(const Element& e, std::span<const Point4> pool)
{
    const auto pts = element_points(e, pool);
    return element_volume(e.kind, pts);
}

inline double facet_volume3(ElementKind kind, FaceMask facet, std::span<const Point4> pts)
{
    double v = 0.0;
    for (const auto& t : topology(kind).facet_tets.at(facet))
        v += tetrahedron_volume3(pts[static_cast<std::size_t>(t[0])], pts[static_cast<std::size_t>(t[1])],
                                 pts[static_cast<std::size_t>(t[2])], pts[static_cast<std::size_t>(t[3])]);
    return v;
}

inline double boundary_volume3(ElementKind kind, std::span<const Point4> pts)
{
    double v = 0.0;
    for (FaceMask f : topology(kind).facets)
        v += facet_volume3(kind, f, pts);
    return v;
}

inline double boundary_volume3(const Element& e, std::span<const Point4> pool)
{
    const auto pts = element_points(e, pool);
    return boundary_volume3(e.kind, pts);
}

inline double diameter(std::span<const Point4> pts)
{
    double h = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            h = std::max(h, distance(pts[i], pts[j]));
    return h;
}

inline double diameter(const Element& e, std::span<const Point4> pool)
{
    const auto pts = element_points(e, pool);
    return diameter(pts);
}

/// delta(K) = h(K) vol(dK) / (8 vol(K)).
inline double degeneracy_measure(ElementKind kind, std::span<const Point4> pts,
                                 const Tolerances& tol = default_tolerances)
{
    const double vol = element_volume(kind, pts);
    if (!(vol > tol.vol))
        throw Error(ErrorCode::DegenerateElement, "element volume is zero");
    return diameter(pts) * boundary_volume3(kind, pts) / (8.0 * vol);
}

inline double degeneracy_measure(const Element& e, std::span<const Point4> pool,
                                 const Tolerances& tol = default_tolerances)
{
    const auto pts = element_points(e, pool);
    return degeneracy_measure(e.kind, pts, tol);
}

/// Half the diagonal of the n-cube over its edge: the ratio of the lateral
/// edge to the base edge of the pyramid joining a facet to the centroid.
inline double canonical_pyramid_edge_ratio(int n)
{
    if (n < 1)
        throw Error(ErrorCode::InvalidParams, "dimension must be positive");
    return 0.5 * std::sqrt(static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// Congruence

/// Similarity b + c Q x taking source vertex i onto target vertex perm[i].
struct CongruenceWitness {
    double scale = 1.0;
    Matrix4 rotation = Matrix4::identity();
    Point4 translation{};
    std::vector<int> perm;

    Point4 apply(const Point4& x) const { return translation + scale * (rotation * x); }
};

namespace detail {

/// Indices of the first five affinely independent points.
inline std::optional<std::array<int, 5>> affine_frame(std::span<const Point4> pts)
{
    std::array<int, 5> frame{0, 0, 0, 0, 0};
    std::vector<Point4> chosen{pts[0]};
    int k = 1;
    for (std::size_t i = 1; i < pts.size() && k < 5; ++i) {
        chosen.push_back(pts[i]);
        if (affine_dimension(chosen) == k)
            frame[static_cast<std::size_t>(k++)] = static_cast<int>(i);
        else
            chosen.pop_back();
    }
    if (k < 5)
        return std::nullopt;
    return frame;
}

inline std::vector<double> distance_signature(std::span<const Point4> pts, std::size_t i, double unit)
{
    std::vector<double> s;
    for (std::size_t j = 0; j < pts.size(); ++j)
        if (j != i)
            s.push_back(distance(pts[i], pts[j]) / unit);
    std::sort(s.begin(), s.end());
    return s;
}

inline bool close_lists(const std::vector<double>& a, const std::vector<double>& b, double tol)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (std::abs(a[i] - b[i]) > tol)
            return false;
    return true;
}

} // namespace detail

/// Every vertex correspondence realizing a congruence (or, with
/// allow_scale, a similarity) from a onto b.
inline std::vector<CongruenceWitness> all_congruences(std::span<const Point4> a, std::span<const Point4> b,
                                                      bool allow_scale,
                                                      const Tolerances& tol = default_tolerances,
                                                      std::size_t limit = std::size_t(-1))
{
    std::vector<CongruenceWitness> out;
    if (a.size() != b.size() || a.empty())
        return out;
    const std::size_t n = a.size();
    const double ha = diameter(a), hb = diameter(b);
    if (!(ha > 0.0) || !(hb > 0.0))
        return out;
    const double scale = allow_scale ? hb / ha : 1.0;
    if (!allow_scale && std::abs(ha - hb) > tol.geom * ha)
        return out;
    const auto frame = detail::affine_frame(a);
    if (!frame)
        return out;

    // Candidate images of each source vertex: equal normalized distance multiset.
    const double lt = tol.geom;
    std::vector<std::vector<double>> sa(n), sb(n);
    for (std::size_t i = 0; i < n; ++i) {
        sa[i] = detail::distance_signature(a, i, ha);
        sb[i] = detail::distance_signature(b, i, hb);
    }
    std::vector<std::vector<int>> cand(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (detail::close_lists(sa[i], sb[j], lt))
                cand[i].push_back(static_cast<int>(j));

    Matrix4 ma;
    for (std::size_t c = 0; c < 4; ++c)
        for (std::size_t r = 0; r < 4; ++r)
            ma(r, c) = a[static_cast<std::size_t>((*frame)[c + 1])][r] - a[static_cast<std::size_t>((*frame)[0])][r];
    Matrix4 ma_inv;
    if (!invert(ma, ma_inv))
        return out;

    std::array<int, 5> img{};
    std::vector<bool> used(n, false);
    auto dist_ok = [&](int depth) {
        const auto i = static_cast<std::size_t>((*frame)[static_cast<std::size_t>(depth)]);
        for (int d = 0; d < depth; ++d) {
            const auto k = static_cast<std::size_t>((*frame)[static_cast<std::size_t>(d)]);
            const double da = distance(a[i], a[k]) * scale;
            const double db = distance(b[static_cast<std::size_t>(img[static_cast<std::size_t>(depth)])],
                                       b[static_cast<std::size_t>(img[static_cast<std::size_t>(d)])]);
            if (std::abs(da - db) > lt * hb)
                return false;
        }
        return true;
    };

    auto finish = [&] {
        Matrix4 mb;
        for (std::size_t c = 0; c < 4; ++c)
            for (std::size_t r = 0; r < 4; ++r)
                mb(r, c) = b[static_cast<std::size_t>(img[c + 1])][r] - b[static_cast<std::size_t>(img[0])][r];
        Matrix4 cq = mb * ma_inv;
        Matrix4 q = cq;
        for (double& x : q.a)
            x /= scale;
        if (orthogonality_defect(q) > tol.ortho)
            return;
        CongruenceWitness w;
        w.scale = scale;
        w.rotation = q;
        w.translation = b[static_cast<std::size_t>(img[0])] - scale * (q * a[static_cast<std::size_t>((*frame)[0])]);
        w.perm.assign(n, -1);
        std::vector<bool> taken(n, false);
        for (std::size_t i = 0; i < n; ++i) {
            const Point4 y = w.apply(a[i]);
            int hit = -1;
            for (std::size_t j = 0; j < n; ++j)
                if (!taken[j] && distance(y, b[j]) <= lt * hb) {
                    hit = static_cast<int>(j);
                    break;
                }
            if (hit < 0)
                return;
            taken[static_cast<std::size_t>(hit)] = true;
            w.perm[i] = hit;
        }
        out.push_back(std::move(w));
    };

    auto dfs = [&](auto&& self, int depth) -> void {
        if (out.size() >= limit)
            return;
        if (depth == 5) {
            finish();
            return;
        }
        const auto i = static_cast<std::size_t>((*frame)[static_cast<std::size_t>(depth)]);
        for (int j : cand[i]) {
            if (used[static_cast<std::size_t>(j)])
                continue;
            img[static_cast<std::size_t>(depth)] = j;
            if (!dist_ok(depth))
                continue;
            used[static_cast<std::size_t>(j)] = true;
            self(self, depth + 1);
            used[static_cast<std::size_t>(j)] = false;
        }
    };
    dfs(dfs, 0);
    return out;
}

inline std::optional<CongruenceWitness> test_congruence(std::span<const Point4> a, std::span<const Point4> b,
                                                        bool allow_scale = false,
                                                        const Tolerances& tol = default_tolerances)
{
    auto all = all_congruences(a, b, allow_scale, tol, 1);
    if (all.empty())
        return std::nullopt;
    return all.front();
}

inline std::optional<CongruenceWitness> test_congruence(const Element& a, const Element& b,
                                                        std::span<const Point4> pool, bool allow_scale = false,
                                                        const Tolerances& tol = default_tolerances)
{
    if (a.kind != b.kind)
        throw Error(ErrorCode::KindMismatch, "congruence needs elements of one kind");
    const auto pa = element_points(a, pool);
    const auto pb = element_points(b, pool);
    return test_congruence(pa, pb, allow_scale, tol);
}

} // namespace hybrid4
