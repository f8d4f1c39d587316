#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "hybrid4/elements.hpp"
#include "hybrid4/point4.hpp"

namespace hybrid4 {

/// Indexed vertex list with get-or-insert by coordinates.
///
/// Refinement only ever averages dyadic coordinates, so the same point is
/// always produced bit-for-bit and exact lookup suffices. Points read from
/// outside (mesh files) go through insert_near, which also consults a
/// quantized grid with cell size tol.
class VertexPool {
public:
    VertexPool() = default;

    const std::vector<Point4>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Point4& operator[](VertexId i) const { return points_[i]; }

    void reserve(std::size_t n)
    {
        points_.reserve(n);
        exact_.reserve(n);
    }

    VertexId insert(const Point4& p)
    {
        const Point4 key = canonical(p);
        auto [it, fresh] = exact_.try_emplace(key, static_cast<VertexId>(points_.size()));
        if (fresh) {
            points_.push_back(key);
            if (near_tol_ > 0.0)
                grid_.emplace(cell(key), it->second);
        }
        return it->second;
    }

    std::optional<VertexId> find(const Point4& p) const
    {
        auto it = exact_.find(canonical(p));
        if (it == exact_.end())
            return std::nullopt;
        return it->second;
    }

    /// Like insert, but reuses any existing vertex within tol (max norm).
    VertexId insert_near(const Point4& p, double tol)
    {
        if (near_tol_ != tol)
            rebuild_grid(tol);
        if (auto hit = find(p))
            return *hit;
        const auto c = cell(p);
        for (int n = 0; n < 81; ++n) {
            GridKey k = c;
            int m = n;
            for (std::size_t d = 0; d < 4; ++d) {
                k[d] += m % 3 - 1;
                m /= 3;
            }
            auto [lo, hi] = grid_.equal_range(k);
            for (auto it = lo; it != hi; ++it) {
                const Point4& q = points_[it->second];
                bool close = true;
                for (std::size_t d = 0; d < 4; ++d)
                    close = close && std::abs(q[d] - p[d]) <= tol;
                if (close)
                    return it->second;
            }
        }
        return insert(p);
    }

private:
    using GridKey = std::array<std::int64_t, 4>;
    struct GridHash {
        std::size_t operator()(const GridKey& k) const noexcept
        {
            std::size_t h = 0;
            for (auto v : k)
                h = h * 1000003u ^ std::hash<std::int64_t>{}(v);
            return h;
        }
    };

    static Point4 canonical(Point4 p)
    {
        for (double& v : p.x)
            if (v == 0.0)
                v = 0.0;
        return p;
    }

    GridKey cell(const Point4& p) const
    {
        GridKey k;
        for (std::size_t d = 0; d < 4; ++d)
            k[d] = static_cast<std::int64_t>(std::floor(p[d] / near_tol_));
        return k;
    }

    void rebuild_grid(double tol)
    {
        near_tol_ = tol;
        grid_.clear();
        for (std::size_t i = 0; i < points_.size(); ++i)
            grid_.emplace(cell(points_[i]), static_cast<VertexId>(i));
    }

    std::vector<Point4> points_;
    std::unordered_map<Point4, VertexId, Point4Hash> exact_;
    double near_tol_ = 0.0;
    std::unordered_multimap<GridKey, VertexId, GridHash> grid_;
};

} // namespace hybrid4
