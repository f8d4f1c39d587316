#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "hybrid4/elements.hpp"
#include "hybrid4/geometry.hpp"
#include "hybrid4/vertex_pool.hpp"

namespace hybrid4 {

/// One partition operator written against the reference ordering of its
/// parent. Local vertex ids run over the parent's vertices first and then
/// over new_points, each of which is the average of a set of parent vertices.
struct SubdivisionTable {
    struct Child {
        ElementKind kind;
        std::vector<int> v;
    };

    char op = '?';
    ElementKind parent = ElementKind::Tesseract;
    std::vector<std::vector<int>> new_points;
    std::vector<Child> listed;   // children as published (E: generated)
    std::vector<Child> children; // same children, reordered into reference frames

    int local_count() const { return vertex_count(parent) + static_cast<int>(new_points.size()); }

    /// Coordinates of every local vertex for a parent with vertices pts.
    std::vector<Point4> local_points(std::span<const Point4> pts) const
    {
        std::vector<Point4> out(pts.begin(), pts.end());
        for (const auto& set : new_points) {
            Point4 s{};
            for (int i : set)
                s += pts[static_cast<std::size_t>(i)];
            out.push_back((1.0 / static_cast<double>(set.size())) * s);
        }
        return out;
    }
};

namespace detail {

inline std::vector<int> one_based(std::initializer_list<int> ids)
{
    std::vector<int> v;
    for (int i : ids)
        v.push_back(i - 1);
    return v;
}

/// Split preference for a bipentatope child: the two square vertices that
/// end up in S^ and S~ only (p2 and p4 of the reference frame).
struct SplitHint {
    int child = -1;
    int upper_apex = -1; // local id that becomes p2
    int lower_apex = -1; // local id that becomes p4
};

/// Reorders every listed child so that child vertex i is the image of
/// reference vertex i under a similarity. Among the admissible orderings the
/// one whose rotation is closest to the identity (largest trace) is kept,
/// ties broken lexicographically; split hints pin the bipentatope diagonal.
inline void normalize_frames(SubdivisionTable& t, const std::vector<SplitHint>& hints = {})
{
    const auto local = t.local_points(reference_vertices(t.parent));
    t.children.clear();
    for (std::size_t c = 0; c < t.listed.size(); ++c) {
        const auto& ch = t.listed[c];
        std::vector<Point4> pts;
        for (int id : ch.v)
            pts.push_back(local[static_cast<std::size_t>(id)]);
        const auto& ref = reference_vertices(ch.kind);
        auto witnesses = all_congruences(ref, pts, true);
        if (witnesses.empty())
            throw Error(ErrorCode::KindMismatch, std::string("child ") + std::to_string(c + 1) + " of operator "
                                                     + t.op + " is not similar to its reference element");
        const SplitHint* hint = nullptr;
        for (const auto& h : hints)
            if (h.child == static_cast<int>(c))
                hint = &h;
        std::optional<std::vector<int>> best;
        double best_trace = -1e300;
        for (const auto& w : witnesses) {
            std::vector<int> order;
            for (int i : w.perm)
                order.push_back(ch.v[static_cast<std::size_t>(i)]);
            if (hint && (order[1] != hint->upper_apex || order[3] != hint->lower_apex))
                continue;
            double tr = 0.0;
            for (std::size_t i = 0; i < 4; ++i)
                tr += w.rotation(i, i);
            if (!best || tr > best_trace + 1e-9 || (std::abs(tr - best_trace) <= 1e-9 && order < *best)) {
                best = order;
                best_trace = tr;
            }
        }
        if (!best)
            throw Error(ErrorCode::KindMismatch, "split hint cannot be honoured");
        t.children.push_back({ch.kind, *best});
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// E: uniform split of a tesseract into 16.

inline SubdivisionTable make_table_E()
{
    SubdivisionTable t;
    t.op = 'E';
    t.parent = ElementKind::Tesseract;
    const auto& ref = reference_tesseract();
    // Lattice {-1, 0, 1}^4; points with a zero coordinate are new and are
    // the centroid of the face on which the nonzero coordinates are fixed.
    auto local_id = [&](const std::array<int, 4>& xi) -> int {
        bool corner = std::none_of(xi.begin(), xi.end(), [](int v) { return v == 0; });
        if (corner) {
            for (std::size_t i = 0; i < ref.size(); ++i) {
                bool eq = true;
                for (std::size_t d = 0; d < 4; ++d)
                    eq = eq && ref[i][d] == xi[d];
                if (eq)
                    return static_cast<int>(i);
            }
        }
        std::vector<int> set;
        for (std::size_t i = 0; i < ref.size(); ++i) {
            bool on = true;
            for (std::size_t d = 0; d < 4; ++d)
                on = on && (xi[d] == 0 || ref[i][d] == xi[d]);
            if (on)
                set.push_back(static_cast<int>(i));
        }
        auto it = std::find(t.new_points.begin(), t.new_points.end(), set);
        if (it != t.new_points.end())
            return 16 + static_cast<int>(it - t.new_points.begin());
        t.new_points.push_back(set);
        return 16 + static_cast<int>(t.new_points.size()) - 1;
    };
    for (int s = 0; s < 16; ++s) {
        std::array<int, 4> dir;
        for (std::size_t d = 0; d < 4; ++d)
            dir[d] = (s >> d) & 1 ? 1 : -1;
        SubdivisionTable::Child ch{ElementKind::Tesseract, {}};
        for (const auto& r : ref) {
            std::array<int, 4> xi;
            for (std::size_t d = 0; d < 4; ++d)
                xi[d] = (dir[d] + static_cast<int>(r[d])) / 2;
            ch.v.push_back(local_id(xi));
        }
        t.listed.push_back(ch);
    }
    t.children = t.listed; // already translated copies of T*
    return t;
}

// ---------------------------------------------------------------------------
// B: tesseract into eight cubic pyramids sharing the centroid t0.

inline SubdivisionTable make_table_B()
{
    SubdivisionTable t;
    t.op = 'B';
    t.parent = ElementKind::Tesseract;
    std::vector<int> all(16);
    for (int i = 0; i < 16; ++i)
        all[static_cast<std::size_t>(i)] = i;
    t.new_points.push_back(all); // t0, local id 16
    using detail::one_based;
    const int t0 = 17;           // one-based id of t0
    const std::vector<std::vector<int>> k{
        one_based({1, 2, 3, 4, 5, 6, 7, 8, t0}),          one_based({1, 3, 4, 6, 9, 11, 12, 14, t0}),
        one_based({9, 10, 11, 12, 13, 14, 15, 16, t0}),   one_based({2, 5, 7, 8, 10, 13, 15, 16, t0}),
        one_based({4, 6, 7, 8, 12, 14, 15, 16, t0}),      one_based({1, 2, 3, 5, 9, 10, 11, 13, t0}),
        one_based({1, 2, 4, 7, 11, 13, 14, 16, t0}),      one_based({3, 5, 6, 8, 9, 10, 12, 15, t0}),
    };
    for (const auto& v : k)
        t.listed.push_back({ElementKind::CubicPyramid, v});
    detail::normalize_frames(t);
    return t;
}

// ---------------------------------------------------------------------------
// D: cubic pyramid into ten cubic pyramids and eighteen bipentatopes over the
// vertices k1..k36 (local id = index - 1).

inline const std::vector<std::array<int, 2>>& midpoints_D()
{
    static const std::vector<std::array<int, 2>> m{
        {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 7}, {1, 8}, {1, 9}, {2, 5}, {2, 7}, {2, 8}, {2, 9}, {3, 4}, {3, 5}, {3, 6},
        {3, 8}, {3, 9}, {4, 6}, {4, 7}, {4, 8}, {4, 9}, {5, 8}, {5, 9}, {6, 8}, {6, 9}, {7, 8}, {7, 9}, {8, 9},
    };
    return m; // k10 .. k36
}

inline SubdivisionTable make_table_D()
{
    SubdivisionTable t;
    t.op = 'D';
    t.parent = ElementKind::CubicPyramid;
    for (const auto& [a, b] : midpoints_D())
        t.new_points.push_back({a - 1, b - 1});
    using detail::one_based;
    const std::vector<std::vector<int>> pyr{
        one_based({1, 10, 11, 12, 13, 14, 15, 16, 21}),  one_based({2, 10, 13, 14, 15, 17, 18, 19, 20}),
        one_based({4, 12, 14, 15, 21, 26, 27, 28, 29}),  one_based({7, 14, 15, 18, 19, 27, 28, 34, 35}),
        one_based({3, 11, 13, 15, 21, 22, 23, 24, 25}),  one_based({5, 13, 15, 17, 19, 22, 24, 30, 31}),
        one_based({6, 15, 21, 23, 24, 26, 28, 32, 33}),  one_based({8, 15, 19, 24, 28, 30, 32, 34, 36}),
        one_based({9, 16, 20, 25, 29, 31, 33, 35, 36}),  one_based({15, 16, 20, 25, 29, 31, 33, 35, 36}),
    };
    const std::vector<std::vector<int>> bip{
        one_based({15, 21, 23, 24, 25, 33}), one_based({11, 13, 15, 16, 21, 25}), one_based({12, 14, 15, 16, 21, 29}),
        one_based({15, 21, 26, 28, 29, 33}), one_based({15, 24, 28, 32, 33, 36}), one_based({14, 15, 27, 28, 29, 35}),
        one_based({15, 19, 28, 34, 35, 36}), one_based({13, 15, 17, 19, 20, 31}), one_based({15, 19, 24, 30, 31, 36}),
        one_based({14, 15, 18, 19, 20, 35}), one_based({13, 15, 22, 24, 25, 31}), one_based({10, 13, 14, 15, 16, 20}),
        one_based({15, 19, 20, 31, 35, 36}), one_based({15, 28, 29, 33, 35, 36}), one_based({15, 16, 21, 25, 29, 33}),
        one_based({13, 15, 16, 20, 25, 31}), one_based({15, 24, 25, 31, 33, 36}), one_based({14, 15, 16, 20, 29, 35}),
    };
    for (const auto& v : pyr)
        t.listed.push_back({ElementKind::CubicPyramid, v});
    for (const auto& v : bip)
        t.listed.push_back({ElementKind::Bipentatope, v});
    // Published splits: P10 = S^[k15 k18 k19 k20 k35] u S~[k14 k15 k18 k20 k35]
    // and P14 = S^[k15 k28 k29 k33 k36] u S~[k15 k28 k29 k35 k36].
    detail::normalize_frames(t, {{10 + 9, 19 - 1, 14 - 1}, {10 + 13, 33 - 1, 35 - 1}});
    return t;
}

// ---------------------------------------------------------------------------
// M: bipentatope into sixteen bipentatopes over p1..p20.

inline const std::vector<std::array<int, 2>>& midpoints_M()
{
    static const std::vector<std::array<int, 2>> m{
        {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}, {2, 3}, {2, 5}, {2, 6}, {3, 4}, {3, 5}, {3, 6}, {4, 5}, {4, 6}, {5, 6},
    };
    return m; // p7 .. p20
}

inline SubdivisionTable make_table_M()
{
    SubdivisionTable t;
    t.op = 'M';
    t.parent = ElementKind::Bipentatope;
    for (const auto& [a, b] : midpoints_M())
        t.new_points.push_back({a - 1, b - 1});
    using detail::one_based;
    const std::vector<std::vector<int>> bip{
        one_based({5, 10, 13, 16, 18, 20}), one_based({6, 11, 14, 17, 19, 20}), one_based({8, 10, 13, 16, 18, 20}),
        one_based({8, 11, 14, 17, 19, 20}), one_based({8, 16, 17, 18, 19, 20}), one_based({8, 13, 14, 16, 17, 20}),
        one_based({8, 10, 11, 18, 19, 20}), one_based({8, 10, 11, 13, 14, 20}), one_based({3, 8, 12, 15, 16, 17}),
        one_based({4, 8, 9, 15, 18, 19}),   one_based({1, 7, 8, 9, 10, 11}),    one_based({2, 7, 8, 12, 13, 14}),
        one_based({8, 15, 16, 17, 18, 19}), one_based({8, 12, 13, 14, 16, 17}), one_based({7, 8, 10, 11, 13, 14}),
        one_based({8, 9, 10, 11, 18, 19}),
    };
    for (const auto& v : bip)
        t.listed.push_back({ElementKind::Bipentatope, v});
    // Published splits: P2 = S^[p6 p11 p14 p17 p20] u S~[p6 p11 p17 p19 p20],
    // P4 = S^[p8 p11 p14 p17 p20] u S~[p8 p11 p17 p19 p20].
    detail::normalize_frames(t, {{1, 14 - 1, 19 - 1}, {3, 14 - 1, 19 - 1}});
    return t;
}

inline const SubdivisionTable& table_E()
{
    static const SubdivisionTable t = make_table_E();
    return t;
}
inline const SubdivisionTable& table_B()
{
    static const SubdivisionTable t = make_table_B();
    return t;
}
inline const SubdivisionTable& table_D()
{
    static const SubdivisionTable t = make_table_D();
    return t;
}
inline const SubdivisionTable& table_M()
{
    static const SubdivisionTable t = make_table_M();
    return t;
}

// ---------------------------------------------------------------------------
// Operators on pooled elements.

/// Applies a table to one element, inserting new vertices into the pool.
inline std::vector<Element> apply_table(const SubdivisionTable& t, const Element& e, VertexPool& pool)
{
    if (e.kind != t.parent)
        throw Error(ErrorCode::KindMismatch, std::string("operator ") + t.op + " cannot refine a " + kind_name(e.kind));
    std::array<VertexId, 96> ids{};
    const int nv = e.size();
    for (int i = 0; i < nv; ++i)
        ids[static_cast<std::size_t>(i)] = e.v[static_cast<std::size_t>(i)];
    for (std::size_t n = 0; n < t.new_points.size(); ++n) {
        Point4 s{};
        for (int i : t.new_points[n])
            s += pool[e.v[static_cast<std::size_t>(i)]];
        ids[static_cast<std::size_t>(nv) + n] =
            pool.insert((1.0 / static_cast<double>(t.new_points[n].size())) * s);
    }
    std::vector<Element> out;
    out.reserve(t.children.size());
    for (const auto& ch : t.children) {
        Element c;
        c.kind = ch.kind;
        for (std::size_t i = 0; i < ch.v.size(); ++i)
            c.v[i] = ids[static_cast<std::size_t>(ch.v[i])];
        out.push_back(c);
    }
    return out;
}

inline std::vector<Element> subdivide_E(const Element& e, VertexPool& pool) { return apply_table(table_E(), e, pool); }
inline std::vector<Element> subdivide_B(const Element& e, VertexPool& pool) { return apply_table(table_B(), e, pool); }
inline std::vector<Element> subdivide_D(const Element& e, VertexPool& pool) { return apply_table(table_D(), e, pool); }
inline std::vector<Element> subdivide_M(const Element& e, VertexPool& pool) { return apply_table(table_M(), e, pool); }

/// D for cubic pyramids, M for bipentatopes.
inline std::vector<Element> subdivide_L(const Element& e, VertexPool& pool)
{
    switch (e.kind) {
    case ElementKind::CubicPyramid: return subdivide_D(e, pool);
    case ElementKind::Bipentatope: return subdivide_M(e, pool);
    default: throw Error(ErrorCode::KindMismatch, std::string("L is undefined for a ") + kind_name(e.kind));
    }
}

/// E for tesseracts, L otherwise.
inline std::vector<Element> subdivide_H(const Element& e, VertexPool& pool)
{
    if (e.kind == ElementKind::Tesseract)
        return subdivide_E(e, pool);
    return subdivide_L(e, pool);
}

} // namespace hybrid4
