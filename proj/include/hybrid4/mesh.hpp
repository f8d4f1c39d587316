#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "hybrid4/config.hpp"
#include "hybrid4/elements.hpp"
#include "hybrid4/error.hpp"
#include "hybrid4/geometry.hpp"
#include "hybrid4/point4.hpp"
#include "hybrid4/refinement.hpp"
#include "hybrid4/vertex_pool.hpp"

namespace hybrid4 {

/// Neumaier-compensated running sum.
struct CompensatedSum {
    double sum = 0.0;
    double c = 0.0;

    void add(double x)
    {
        const double t = sum + x;
        c += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + c; }
};

/// Omega1 is meshed by tesseracts, Omega2 by pyramids and their descendants.
enum class Region : std::uint8_t { Omega1, Omega2 };

struct Box {
    Point4 lo;
    Point4 hi;

    double volume() const
    {
        double v = 1.0;
        for (std::size_t d = 0; d < 4; ++d)
            v *= hi[d] - lo[d];
        return v;
    }
};

struct Mesh {
    VertexPool pool;
    std::vector<Element> elements;
    std::vector<Region> regions;
    std::optional<Box> domain; // set for structured meshes; enables the volume check

    std::size_t size() const { return elements.size(); }

    std::size_t count(ElementKind k) const
    {
        return static_cast<std::size_t>(
            std::count_if(elements.begin(), elements.end(), [k](const Element& e) { return e.kind == k; }));
    }

    std::vector<Point4> points_of(std::size_t i) const { return element_points(elements[i], pool.points()); }

    Point4 centroid(std::size_t i) const
    {
        Point4 c{};
        for (VertexId v : elements[i])
            c = c + pool[v];
        return (1.0 / elements[i].size()) * c;
    }

    double volume() const
    {
        CompensatedSum v;
        for (const auto& e : elements)
            v.add(element_volume(e, pool.points()));
        return v.value();
    }
};

/// Structured grid of counts[0] x ... x counts[3] tesseracts, each an affine
/// image of T* with its vertex order.
inline Mesh mesh_canonical_box(const std::array<int, 4>& counts, const Box& box)
{
    for (std::size_t d = 0; d < 4; ++d) {
        if (counts[d] < 1)
            throw Error(ErrorCode::EmptyBox, "cell counts must be positive");
        if (!(box.hi[d] > box.lo[d]))
            throw Error(ErrorCode::EmptyBox, "box has zero extent");
    }
    Mesh m;
    m.domain = box;
    Point4 h;
    for (std::size_t d = 0; d < 4; ++d)
        h[d] = (box.hi[d] - box.lo[d]) / counts[d];

    // Lattice vertices first so that ids follow lexicographic order.
    auto lattice = [&](const std::array<int, 4>& ix) {
        Point4 p;
        for (std::size_t d = 0; d < 4; ++d)
            p[d] = ix[d] == counts[d] ? box.hi[d] : box.lo[d] + ix[d] * h[d];
        return p;
    };
    m.pool.reserve(static_cast<std::size_t>((counts[0] + 1) * (counts[1] + 1) * (counts[2] + 1) * (counts[3] + 1)));
    std::array<int, 4> ix{};
    for (ix[0] = 0; ix[0] <= counts[0]; ++ix[0])
        for (ix[1] = 0; ix[1] <= counts[1]; ++ix[1])
            for (ix[2] = 0; ix[2] <= counts[2]; ++ix[2])
                for (ix[3] = 0; ix[3] <= counts[3]; ++ix[3])
                    m.pool.insert(lattice(ix));

    const auto& ref = reference_tesseract();
    std::array<int, 4> c{};
    for (c[0] = 0; c[0] < counts[0]; ++c[0])
        for (c[1] = 0; c[1] < counts[1]; ++c[1])
            for (c[2] = 0; c[2] < counts[2]; ++c[2])
                for (c[3] = 0; c[3] < counts[3]; ++c[3]) {
                    Element e;
                    e.kind = ElementKind::Tesseract;
                    for (std::size_t i = 0; i < 16; ++i) {
                        std::array<int, 4> corner = c;
                        for (std::size_t d = 0; d < 4; ++d)
                            corner[d] += ref[i][d] > 0 ? 1 : 0;
                        e.v[i] = *m.pool.find(lattice(corner));
                    }
                    m.elements.push_back(e);
                    m.regions.push_back(Region::Omega1);
                }
    return m;
}

inline Mesh mesh_canonical_box(int m_per_axis, const Box& box = {{0, 0, 0, 0}, {1, 1, 1, 1}})
{
    return mesh_canonical_box({m_per_axis, m_per_axis, m_per_axis, m_per_axis}, box);
}

namespace detail {

inline Mesh map_elements(const Mesh& in, const std::function<std::vector<Element>(const Element&, Region, VertexPool&)>& f)
{
    Mesh out;
    out.pool = in.pool;
    out.domain = in.domain;
    out.elements.reserve(in.elements.size() * 8);
    out.regions.reserve(in.elements.size() * 8);
    for (std::size_t i = 0; i < in.elements.size(); ++i) {
        for (const Element& c : f(in.elements[i], in.regions[i], out.pool)) {
            out.elements.push_back(c);
            out.regions.push_back(c.kind == ElementKind::Tesseract ? in.regions[i] : Region::Omega2);
        }
    }
    return out;
}

} // namespace detail

/// Applies B to every tesseract whose centroid satisfies in_omega2.
inline Mesh hybridize(const Mesh& mesh, const std::function<bool(const Point4&)>& in_omega2)
{
    std::vector<bool> pick(mesh.size());
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        if (mesh.elements[i].kind != ElementKind::Tesseract || mesh.regions[i] != Region::Omega1)
            throw Error(ErrorCode::NonConformingInput, "hybridize expects a tesseract mesh");
        pick[i] = in_omega2(mesh.centroid(i));
    }
    std::size_t i = 0;
    return detail::map_elements(mesh, [&](const Element& e, Region, VertexPool& pool) {
        const bool b = pick[i++];
        return b ? subdivide_B(e, pool) : std::vector<Element>{e};
    });
}

/// One application of H to every element.
inline Mesh refine_H(const Mesh& mesh)
{
    return detail::map_elements(mesh, [](const Element& e, Region, VertexPool& pool) { return subdivide_H(e, pool); });
}

/// k applications of H. Returns every stage, the input first.
inline std::vector<Mesh> refine_stages(const Mesh& mesh, int levels)
{
    if (levels < 0)
        throw Error(ErrorCode::InvalidParams, "levels must be non-negative");
    std::vector<Mesh> out{mesh};
    for (int k = 0; k < levels; ++k)
        out.push_back(refine_H(out.back()));
    return out;
}

inline Mesh refine_pipeline(const Mesh& mesh, int levels)
{
    if (levels < 0)
        throw Error(ErrorCode::InvalidParams, "levels must be non-negative");
    Mesh m = mesh;
    for (int k = 0; k < levels; ++k)
        m = refine_H(m);
    return m;
}

// ---------------------------------------------------------------------------
// Conformity audit

struct ConformityReport {
    std::size_t elements = 0;
    std::size_t pairs = 0;            // element pairs sharing at least one vertex
    std::size_t bad_pairs = 0;        // shared vertex set is not a face of both
    std::size_t hanging = 0;          // vertex lying in an element it is not a vertex of
    std::size_t overfull_facets = 0;  // facet owned by more than two elements
    std::size_t open_facets = 0;      // facet owned once but not on the domain boundary
    std::size_t degenerate = 0;
    double volume = 0.0;
    std::optional<double> expected_volume;
    double volume_tol = 1e-12;
    std::vector<std::string> failures; // first few, human readable

    bool volume_ok() const
    {
        return !expected_volume || std::abs(volume - *expected_volume) <= volume_tol * std::abs(*expected_volume);
    }

    bool pass() const
    {
        return bad_pairs == 0 && hanging == 0 && overfull_facets == 0 && open_facets == 0 && degenerate == 0 &&
               volume_ok();
    }
};

namespace detail {

inline void note(ConformityReport& r, const std::string& s)
{
    if (r.failures.size() < 20)
        r.failures.push_back(s);
}

inline FaceMask local_mask(const Element& e, const std::vector<VertexId>& shared)
{
    FaceMask m = 0;
    for (int i = 0; i < e.size(); ++i)
        if (std::find(shared.begin(), shared.end(), e.v[static_cast<std::size_t>(i)]) != shared.end())
            m |= FaceMask{1} << i;
    return m;
}

/// Closed containment in one of the element's simplices, up to tol in
/// barycentric coordinates.
inline bool contains(ElementKind kind, std::span<const Point4> pts, const Point4& x, double tol)
{
    for (const auto& s : topology(kind).simplices) {
        const Point4& o = pts[static_cast<std::size_t>(s[0])];
        Matrix4 m = from_columns(pts[static_cast<std::size_t>(s[1])] - o, pts[static_cast<std::size_t>(s[2])] - o,
                                 pts[static_cast<std::size_t>(s[3])] - o, pts[static_cast<std::size_t>(s[4])] - o);
        Matrix4 inv;
        if (!invert(m, inv))
            continue;
        const Point4 l = inv * (x - o);
        const double l0 = 1.0 - l[0] - l[1] - l[2] - l[3];
        if (l0 >= -tol && l[0] >= -tol && l[1] >= -tol && l[2] >= -tol && l[3] >= -tol)
            return true;
    }
    return false;
}

inline bool on_box_boundary(const Box& b, const std::vector<Point4>& pts, double tol)
{
    for (std::size_t d = 0; d < 4; ++d) {
        bool lo = true, hi = true;
        for (const auto& p : pts) {
            lo = lo && std::abs(p[d] - b.lo[d]) <= tol;
            hi = hi && std::abs(p[d] - b.hi[d]) <= tol;
        }
        if (lo || hi)
            return true;
    }
    return false;
}

} // namespace detail

/// Checks that any two elements meet in a common face of both.
///
/// Pairs sharing vertices are classified combinatorially against both face
/// lattices. Pairs sharing nothing are covered by the hanging-vertex scan
/// (no mesh vertex may sit in an element without being one of its vertices)
/// together with facet matching and, for structured domains, the volume sum.
inline ConformityReport conformity_audit(const Mesh& mesh, const Tolerances& tol = default_tolerances)
{
    ConformityReport r;
    r.elements = mesh.size();
    const auto& pts = mesh.pool.points();
    const std::size_t ne = mesh.size();
    const std::size_t nv = pts.size();

    // Vertex -> element incidence (CSR).
    std::vector<std::uint32_t> start(nv + 1, 0);
    for (const auto& e : mesh.elements)
        for (VertexId v : e)
            ++start[v + 1];
    for (std::size_t i = 0; i < nv; ++i)
        start[i + 1] += start[i];
    std::vector<std::uint32_t> inc(start.back());
    {
        auto fill = start;
        for (std::size_t i = 0; i < ne; ++i)
            for (VertexId v : mesh.elements[i])
                inc[fill[v]++] = static_cast<std::uint32_t>(i);
    }

    // Shared-vertex classification.
    std::vector<std::uint32_t> mark(ne, std::uint32_t(-1));
    std::vector<std::uint32_t> nbrs;
    std::vector<VertexId> shared;
    for (std::size_t i = 0; i < ne; ++i) {
        const Element& a = mesh.elements[i];
        nbrs.clear();
        for (VertexId v : a)
            for (std::uint32_t k = start[v]; k < start[v + 1]; ++k) {
                const std::uint32_t j = inc[k];
                if (j > i && mark[j] != i) {
                    mark[j] = static_cast<std::uint32_t>(i);
                    nbrs.push_back(j);
                }
            }
        for (std::uint32_t j : nbrs) {
            const Element& b = mesh.elements[j];
            shared.clear();
            for (VertexId v : a)
                if (std::find(b.begin(), b.end(), v) != b.end())
                    shared.push_back(v);
            ++r.pairs;
            const FaceMask ma = detail::local_mask(a, shared);
            const FaceMask mb = detail::local_mask(b, shared);
            if (!topology(a.kind).is_face(ma) || !topology(b.kind).is_face(mb)) {
                ++r.bad_pairs;
                std::ostringstream s;
                s << "elements " << i << " (" << kind_name(a.kind) << ") and " << j << " (" << kind_name(b.kind)
                  << ") share " << shared.size() << " vertices that are not a common face";
                detail::note(r, s.str());
            }
        }
    }

    // Volumes and degeneracy.
    double hmin = std::numeric_limits<double>::infinity();
    CompensatedSum vol;
    for (std::size_t i = 0; i < ne; ++i) {
        const auto p = mesh.points_of(i);
        const double v = element_volume(mesh.elements[i].kind, p);
        if (!(v > tol.vol)) {
            ++r.degenerate;
            detail::note(r, "element " + std::to_string(i) + " is degenerate");
        }
        vol.add(v);
        hmin = std::min(hmin, diameter(p));
    }
    r.volume = vol.value();
    if (mesh.domain)
        r.expected_volume = mesh.domain->volume();

    // Hanging vertices via a uniform grid over the vertex pool.
    if (ne > 0) {
        const double cell = hmin;
        using Key = std::array<std::int64_t, 4>;
        struct KeyHash {
            std::size_t operator()(const Key& k) const noexcept
            {
                std::size_t h = 0;
                for (auto v : k)
                    h = h * 1000003u ^ std::hash<std::int64_t>{}(v);
                return h;
            }
        };
        auto key = [cell](const Point4& p) {
            Key k;
            for (std::size_t d = 0; d < 4; ++d)
                k[d] = static_cast<std::int64_t>(std::floor(p[d] / cell));
            return k;
        };
        std::unordered_map<Key, std::vector<VertexId>, KeyHash> grid;
        for (std::size_t v = 0; v < nv; ++v)
            if (start[v + 1] > start[v])
                grid[key(pts[v])].push_back(static_cast<VertexId>(v));

        for (std::size_t i = 0; i < ne; ++i) {
            const Element& e = mesh.elements[i];
            const auto p = mesh.points_of(i);
            Point4 lo = p[0], hi = p[0];
            for (const auto& q : p)
                for (std::size_t d = 0; d < 4; ++d) {
                    lo[d] = std::min(lo[d], q[d]);
                    hi[d] = std::max(hi[d], q[d]);
                }
            const double eps = tol.geom * diameter(p);
            const Key kl = key(lo - Point4{eps, eps, eps, eps}), kh = key(hi + Point4{eps, eps, eps, eps});
            Key k;
            for (k[0] = kl[0]; k[0] <= kh[0]; ++k[0])
                for (k[1] = kl[1]; k[1] <= kh[1]; ++k[1])
                    for (k[2] = kl[2]; k[2] <= kh[2]; ++k[2])
                        for (k[3] = kl[3]; k[3] <= kh[3]; ++k[3]) {
                            auto it = grid.find(k);
                            if (it == grid.end())
                                continue;
                            for (VertexId v : it->second) {
                                if (std::find(e.begin(), e.end(), v) != e.end())
                                    continue;
                                const Point4& x = pts[v];
                                bool in_box = true;
                                for (std::size_t d = 0; d < 4; ++d)
                                    in_box = in_box && x[d] >= lo[d] - eps && x[d] <= hi[d] + eps;
                                if (in_box && detail::contains(e.kind, p, x, tol.geom)) {
                                    ++r.hanging;
                                    detail::note(r, "vertex " + std::to_string(v) + " hangs in element " +
                                                        std::to_string(i) + " (" + kind_name(e.kind) + ")");
                                }
                            }
                        }
        }
    }

    // Facet matching: every facet is owned by two elements or lies on the
    // domain boundary.
    {
        std::map<std::vector<VertexId>, int> owners;
        for (const auto& e : mesh.elements)
            for (auto f : facets(e)) {
                std::sort(f.begin(), f.end());
                ++owners[std::move(f)];
            }
        for (const auto& [f, n] : owners) {
            if (n > 2) {
                ++r.overfull_facets;
                detail::note(r, "facet owned by " + std::to_string(n) + " elements");
            }
            else if (n == 1 && mesh.domain) {
                std::vector<Point4> fp;
                for (VertexId v : f)
                    fp.push_back(pts[v]);
                double h = 0.0;
                for (std::size_t d = 0; d < 4; ++d)
                    h = std::max(h, mesh.domain->hi[d] - mesh.domain->lo[d]);
                if (!detail::on_box_boundary(*mesh.domain, fp, tol.geom * h)) {
                    ++r.open_facets;
                    detail::note(r, "interior facet with a single owner");
                }
            }
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Text format: "dim=4 nv=<n> ne=<m>", vertex lines, then "<kind> <v0> ...".

inline void write_mesh(std::ostream& os, const Mesh& m)
{
    os << "dim=4 nv=" << m.pool.size() << " ne=" << m.size() << '\n';
    char buf[128];
    for (const auto& p : m.pool.points()) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g\n", p[0], p[1], p[2], p[3]);
        os << buf;
    }
    for (const auto& e : m.elements) {
        os << kind_name(e.kind);
        for (VertexId v : e)
            os << ' ' << v;
        os << '\n';
    }
}

/// Reads the text format. Coincident vertices (within tol.dedup) are merged.
/// Regions follow the element kind.
inline Mesh read_mesh(std::istream& is, const Tolerances& tol = default_tolerances)
{
    std::string line;
    if (!std::getline(is, line))
        throw Error(ErrorCode::ParseError, "empty mesh file");
    std::size_t nv = 0, ne = 0;
    if (std::sscanf(line.c_str(), "dim=4 nv=%zu ne=%zu", &nv, &ne) != 2)
        throw Error(ErrorCode::ParseError, "bad header: " + line);
    Mesh m;
    std::vector<VertexId> remap(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        if (!std::getline(is, line))
            throw Error(ErrorCode::ParseError, "missing vertex line");
        std::istringstream ls(line);
        Point4 p;
        if (!(ls >> p[0] >> p[1] >> p[2] >> p[3]))
            throw Error(ErrorCode::ParseError, "bad vertex line: " + line);
        remap[i] = m.pool.insert_near(p, tol.dedup);
    }
    for (std::size_t i = 0; i < ne; ++i) {
        if (!std::getline(is, line))
            throw Error(ErrorCode::ParseError, "missing element line");
        std::istringstream ls(line);
        std::string name;
        ls >> name;
        Element e;
        e.kind = parse_kind(name);
        for (int k = 0; k < e.size(); ++k) {
            std::size_t id;
            if (!(ls >> id) || id >= nv)
                throw Error(ErrorCode::ParseError, "bad element line: " + line);
            e.v[static_cast<std::size_t>(k)] = remap[id];
        }
        m.elements.push_back(e);
        m.regions.push_back(e.kind == ElementKind::Tesseract ? Region::Omega1 : Region::Omega2);
    }
    return m;
}

} // namespace hybrid4
