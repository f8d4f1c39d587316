#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "hybrid4/error.hpp"
#include "hybrid4/point4.hpp"

namespace hybrid4 {

enum class ElementKind : std::uint8_t { Tesseract, CubicPyramid, Bipentatope, Pentatope };

inline constexpr std::array<ElementKind, 4> all_element_kinds{ElementKind::Tesseract, ElementKind::CubicPyramid,
                                                              ElementKind::Bipentatope, ElementKind::Pentatope};

inline constexpr int vertex_count(ElementKind k)
{
    constexpr std::array<int, 4> n{16, 9, 6, 5};
    return n[static_cast<std::size_t>(k)];
}

inline const char* kind_name(ElementKind k)
{
    switch (k) {
    case ElementKind::Tesseract: return "tesseract";
    case ElementKind::CubicPyramid: return "pyramid";
    case ElementKind::Bipentatope: return "bipentatope";
    case ElementKind::Pentatope: return "pentatope";
    }
    return "?";
}

inline ElementKind parse_kind(const std::string& s)
{
    for (auto k : all_element_kinds)
        if (s == kind_name(k))
            return k;
    throw Error(ErrorCode::UnknownKind, "unknown element kind '" + s + "'");
}

using VertexId = std::uint32_t;

/// Element of a mesh: a kind and its vertex indices in reference-frame order.
struct Element {
    ElementKind kind = ElementKind::Tesseract;
    std::array<VertexId, 16> v{};

    int size() const { return vertex_count(kind); }
    const VertexId* begin() const { return v.data(); }
    const VertexId* end() const { return v.data() + size(); }

    static Element make(ElementKind kind, const std::vector<VertexId>& ids)
    {
        if (static_cast<int>(ids.size()) != vertex_count(kind))
            throw Error(ErrorCode::KindMismatch, std::string(kind_name(kind)) + " needs "
                                                     + std::to_string(vertex_count(kind)) + " vertices");
        Element e;
        e.kind = kind;
        std::copy(ids.begin(), ids.end(), e.v.begin());
        return e;
    }

    friend bool operator==(const Element& a, const Element& b)
    {
        return a.kind == b.kind && std::equal(a.begin(), a.end(), b.begin());
    }
};

// ---------------------------------------------------------------------------
// Reference elements, vertices listed in the published order.

/// T* = [-1, 1]^4.
inline const std::vector<Point4>& reference_tesseract()
{
    static const std::vector<Point4> v{
        {-1, -1, -1, -1}, {-1, 1, -1, -1}, {-1, -1, -1, 1}, {1, -1, -1, -1},
        {-1, 1, -1, 1},   {1, -1, -1, 1},  {1, 1, -1, -1},  {1, 1, -1, 1},
        {-1, -1, 1, 1},   {-1, 1, 1, 1},   {-1, -1, 1, -1}, {1, -1, 1, 1},
        {-1, 1, 1, -1},   {1, -1, 1, -1},  {1, 1, 1, 1},    {1, 1, 1, -1},
    };
    return v;
}

/// K*: cube base at x4 = -1, apex k9 at the origin.
inline const std::vector<Point4>& reference_cubic_pyramid()
{
    static const std::vector<Point4> v{
        {-1, -1, -1, -1}, {-1, 1, -1, -1}, {-1, -1, 1, -1}, {1, -1, -1, -1}, {-1, 1, 1, -1},
        {1, -1, 1, -1},   {1, 1, -1, -1},  {1, 1, 1, -1},   {0, 0, 0, 0},
    };
    return v;
}

/// P*: unit square p1..p4 (cyclic) joined with the unit segment p5 p6.
inline const std::vector<Point4>& reference_bipentatope()
{
    static const std::vector<Point4> v{
        {0.5, 0.5, 0.5, -0.5}, {0.5, 0.5, -0.5, -0.5}, {-0.5, 0.5, -0.5, -0.5},
        {-0.5, 0.5, 0.5, -0.5}, {0, 1, 0, -1},           {0, 0, 0, -1},
    };
    return v;
}

/// S*: the standard pentatope.
inline const std::vector<Point4>& reference_pentatope()
{
    static const std::vector<Point4> v{
        {1, -1, -1, -1}, {-1, 1, -1, -1}, {-1, -1, 1, -1}, {-1, -1, -1, 1}, {-1, -1, -1, -1},
    };
    return v;
}

/// Cube corner: the unit simplex with vertices e1, e2, e3, e4, 0, the image
/// of S* under x / 2 + (1/2, 1/2, 1/2, 1/2). A shift of (1, 1, 1, 1) would
/// not reach these vertices.
inline const std::vector<Point4>& cube_corner()
{
    static const std::vector<Point4> v = [] {
        std::vector<Point4> out;
        for (const auto& p : reference_pentatope())
            out.push_back(0.5 * p + Point4{0.5, 0.5, 0.5, 0.5});
        return out;
    }();
    return v;
}

inline const std::vector<Point4>& reference_vertices(ElementKind k)
{
    switch (k) {
    case ElementKind::Tesseract: return reference_tesseract();
    case ElementKind::CubicPyramid: return reference_cubic_pyramid();
    case ElementKind::Bipentatope: return reference_bipentatope();
    case ElementKind::Pentatope: return reference_pentatope();
    }
    throw Error(ErrorCode::UnknownKind, "reference_vertices");
}

// ---------------------------------------------------------------------------
// Face lattice
//
// Faces are vertex subsets stored as bitmasks over the reference ordering.
// Facets come from a brute-force hull of the reference vertices (every
// supporting hyperplane through four affinely independent vertices); lower
// faces are the intersections of facets.

using FaceMask = std::uint32_t;

struct Face {
    FaceMask mask = 0;
    int dim = 0;
};

/// Affine dimension of a point set.
inline int affine_dimension(const std::vector<Point4>& pts)
{
    if (pts.size() <= 1)
        return 0;
    // Gram-Schmidt on the differences with a relative threshold.
    std::vector<Point4> basis;
    double scale = 0.0;
    for (const auto& p : pts)
        scale = std::max(scale, norm(p - pts[0]));
    for (std::size_t i = 1; i < pts.size(); ++i) {
        Point4 d = pts[i] - pts[0];
        for (const auto& b : basis)
            d -= dot(d, b) * b;
        const double n = norm(d);
        if (n > 1e-9 * scale) {
            basis.push_back((1.0 / n) * d);
            if (basis.size() == 4)
                break;
        }
    }
    return static_cast<int>(basis.size());
}

/// Normal of the hyperplane through four points (generalized cross product).
inline Point4 hyperplane_normal(const Point4& a, const Point4& b, const Point4& c, const Point4& d)
{
    const Point4 u = b - a, v = c - a, w = d - a;
    auto det3 = [](double a1, double a2, double a3, double b1, double b2, double b3, double c1, double c2,
                   double c3) { return a1 * (b2 * c3 - b3 * c2) - a2 * (b1 * c3 - b3 * c1) + a3 * (b1 * c2 - b2 * c1); };
    return Point4{det3(u[1], u[2], u[3], v[1], v[2], v[3], w[1], w[2], w[3]),
                   -det3(u[0], u[2], u[3], v[0], v[2], v[3], w[0], w[2], w[3]),
                   det3(u[0], u[1], u[3], v[0], v[1], v[3], w[0], w[1], w[3]),
                   -det3(u[0], u[1], u[2], v[0], v[1], v[2], w[0], w[1], w[2])};
}

inline std::vector<Point4> select(const std::vector<Point4>& pts, FaceMask mask)
{
    std::vector<Point4> out;
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (mask & (FaceMask{1} << i))
            out.push_back(pts[i]);
    return out;
}

/// Vertex-subset masks of the facets of a full-dimensional convex polytope
/// whose points are all vertices.
inline std::vector<FaceMask> hull_facets(const std::vector<Point4>& pts)
{
    const std::size_t n = pts.size();
    double scale = 0.0;
    for (const auto& p : pts)
        for (const auto& q : pts)
            scale = std::max(scale, norm(p - q));
    const double eps = 1e-10 * scale;
    std::vector<FaceMask> facets;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = b + 1; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d) {
                    Point4 nrm = hyperplane_normal(pts[a], pts[b], pts[c], pts[d]);
                    const double len = norm(nrm);
                    if (len < 1e-12 * scale * scale * scale)
                        continue;
                    nrm = (1.0 / len) * nrm;
                    FaceMask on = 0;
                    bool pos = false, neg = false;
                    for (std::size_t m = 0; m < n; ++m) {
                        const double s = dot(nrm, pts[m] - pts[a]);
                        if (std::abs(s) <= eps)
                            on |= FaceMask{1} << m;
                        else if (s > 0)
                            pos = true;
                        else
                            neg = true;
                    }
                    if (pos && neg)
                        continue;
                    if (std::find(facets.begin(), facets.end(), on) == facets.end())
                        facets.push_back(on);
                }
    std::sort(facets.begin(), facets.end());
    return facets;
}

/// All nonempty proper faces (vertices through facets), plus the element
/// itself, ordered by dimension then mask.
inline std::vector<Face> face_lattice_of(const std::vector<Point4>& pts)
{
    const auto facets = hull_facets(pts);
    std::vector<FaceMask> masks = facets;
    for (std::size_t i = 0; i < masks.size(); ++i)
        for (std::size_t j = 0; j < facets.size(); ++j) {
            const FaceMask m = masks[i] & facets[j];
            if (m != 0 && std::find(masks.begin(), masks.end(), m) == masks.end())
                masks.push_back(m);
        }
    const FaceMask all = pts.size() == 32 ? ~FaceMask{0} : (FaceMask{1} << pts.size()) - 1;
    masks.push_back(all);
    std::vector<Face> faces;
    for (FaceMask m : masks)
        faces.push_back({m, affine_dimension(select(pts, m))});
    std::sort(faces.begin(), faces.end(),
              [](const Face& a, const Face& b) { return a.dim != b.dim ? a.dim < b.dim : a.mask < b.mask; });
    return faces;
}

/// Combinatorial data of one element kind, derived once from its reference.
struct KindTopology {
    std::vector<Face> faces;                   // every face incl. the element
    std::vector<FaceMask> facets;              // dim-3 faces
    std::vector<std::array<int, 2>> edges;     // dim-1 faces
    std::vector<std::array<int, 5>> simplices; // triangulation of the element
    std::map<FaceMask, std::vector<std::array<int, 4>>> facet_tets; // triangulation of each facet

    bool is_face(FaceMask m) const
    {
        return std::binary_search(face_masks_.begin(), face_masks_.end(), m);
    }

    std::vector<FaceMask> face_masks_; // sorted, for is_face
};

namespace detail {

/// Pulling triangulation: cone the lowest vertex of a face over the
/// triangulations of its subfaces that avoid it.
inline std::vector<std::vector<int>> pull(const std::vector<Face>& faces, const Face& f)
{
    const int count = std::popcount(f.mask);
    if (count == f.dim + 1) {
        std::vector<int> s;
        for (int i = 0; i < 32; ++i)
            if (f.mask & (FaceMask{1} << i))
                s.push_back(i);
        return {s};
    }
    const int apex = std::countr_zero(f.mask);
    std::vector<std::vector<int>> out;
    for (const auto& g : faces) {
        if (g.dim != f.dim - 1 || (g.mask & ~f.mask) != 0 || (g.mask & (FaceMask{1} << apex)))
            continue;
        for (auto s : pull(faces, g)) {
            s.insert(s.begin(), apex);
            out.push_back(std::move(s));
        }
    }
    return out;
}

inline KindTopology build_topology(const std::vector<Point4>& pts)
{
    KindTopology t;
    t.faces = face_lattice_of(pts);
    for (const auto& f : t.faces) {
        t.face_masks_.push_back(f.mask);
        if (f.dim == 3)
            t.facets.push_back(f.mask);
        if (f.dim == 1) {
            const int a = std::countr_zero(f.mask);
            const int b = 31 - std::countl_zero(f.mask);
            t.edges.push_back({a, b});
        }
    }
    std::sort(t.face_masks_.begin(), t.face_masks_.end());
    for (const auto& s : pull(t.faces, t.faces.back()))
        t.simplices.push_back({s[0], s[1], s[2], s[3], s[4]});
    for (const auto& f : t.faces)
        if (f.dim == 3) {
            auto& tets = t.facet_tets[f.mask];
            for (const auto& s : pull(t.faces, f))
                tets.push_back({s[0], s[1], s[2], s[3]});
        }
    return t;
}

} // namespace detail

inline const KindTopology& topology(ElementKind k)
{
    static const std::array<KindTopology, 4> table{
        detail::build_topology(reference_tesseract()), detail::build_topology(reference_cubic_pyramid()),
        detail::build_topology(reference_bipentatope()), detail::build_topology(reference_pentatope())};
    return table[static_cast<std::size_t>(k)];
}

/// Facets of an element as lists of global vertex ids.
inline std::vector<std::vector<VertexId>> facets(const Element& e)
{
    std::vector<std::vector<VertexId>> out;
    for (FaceMask m : topology(e.kind).facets) {
        std::vector<VertexId> f;
        for (int i = 0; i < e.size(); ++i)
            if (m & (FaceMask{1} << i))
                f.push_back(e.v[static_cast<std::size_t>(i)]);
        out.push_back(std::move(f));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Bipentatope split
//
// The square p1 p2 p3 p4 is cut along the diagonal p1 p3, so both halves
// share the tetrahedron {p1, p3, p5, p6}:
//   S^ = [p1, p2, p3, p5, p6],  S~ = [p1, p3, p4, p5, p6].

inline constexpr std::array<int, 5> split_upper{0, 1, 2, 4, 5};
inline constexpr std::array<int, 5> split_lower{0, 2, 3, 4, 5};

inline std::pair<Element, Element> split_bipentatope(const Element& e)
{
    if (e.kind != ElementKind::Bipentatope)
        throw Error(ErrorCode::KindMismatch, "split_bipentatope needs a bipentatope");
    Element a, b;
    a.kind = b.kind = ElementKind::Pentatope;
    for (std::size_t i = 0; i < 5; ++i) {
        a.v[i] = e.v[static_cast<std::size_t>(split_upper[i])];
        b.v[i] = e.v[static_cast<std::size_t>(split_lower[i])];
    }
    return {a, b};
}

} // namespace hybrid4
