#pragma once
#include <algorithm>
#include <cmath>
#include <map>
#include <utility>
#include <vector>

#include "geom.hpp"

namespace curvembed {

enum class SurfaceKind { plane_patch, plane_with_holes, terrain };

inline std::string surface_kind_str(SurfaceKind k) {
    switch (k) {
        case SurfaceKind::plane_patch: return "plane-patch";
        case SurfaceKind::plane_with_holes: return "plane-with-holes";
        case SurfaceKind::terrain: return "terrain";
    }
    return "?";
}

struct SurfaceEdge {
    int u, v;        // vertex ids, u < v
    int t0, t1;      // incident triangles; t1 == -1 on the boundary
};

struct TriSurface {
    int dim = 2;
    SurfaceKind kind = SurfaceKind::plane_patch;
    std::vector<Point> verts;
    std::vector<std::array<int, 3>> tris;

    // derived connectivity
    std::vector<SurfaceEdge> edges;
    std::vector<std::array<int, 3>> tri_edge;  // per triangle, edge id opposite-free: local j is (v[j], v[j+1])
    std::vector<std::vector<int>> vert_tris;   // triangles incident to each vertex

    // uniform grid over xy for point location
    struct Grid {
        double x0 = 0, y0 = 0, cell = 1;
        int nx = 0, ny = 0;
        std::vector<std::vector<int>> bins;
    } grid;

    Triangle triangle(int t) const {
        return Triangle{verts[tris[t][0]], verts[tris[t][1]], verts[tris[t][2]]};
    }
    int ntris() const { return static_cast<int>(tris.size()); }
    Segment edge_segment(int e) const { return Segment(verts[edges[e].u], verts[edges[e].v]); }
};

namespace detail {

inline void build_grid(TriSurface& S) {
    auto& g = S.grid;
    BBoxD all;
    for (const auto& p : S.verts) all.add(p);
    if (!all.init) return;
    double w = all.hi[0] - all.lo[0], h = all.hi[1] - all.lo[1];
    double span = std::max({w, h, 1e-9});
    int target = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(S.ntris()))));
    g.cell = span / target;
    g.x0 = all.lo[0] - g.cell;
    g.y0 = all.lo[1] - g.cell;
    g.nx = static_cast<int>(w / g.cell) + 3;
    g.ny = static_cast<int>(h / g.cell) + 3;
    g.bins.assign(static_cast<std::size_t>(g.nx) * g.ny, {});
    for (int t = 0; t < S.ntris(); ++t) {
        BBoxD b = bbox_of_triangle(S.triangle(t));
        int ix0 = std::clamp(static_cast<int>((b.lo[0] - g.x0) / g.cell), 0, g.nx - 1);
        int ix1 = std::clamp(static_cast<int>((b.hi[0] - g.x0) / g.cell), 0, g.nx - 1);
        int iy0 = std::clamp(static_cast<int>((b.lo[1] - g.y0) / g.cell), 0, g.ny - 1);
        int iy1 = std::clamp(static_cast<int>((b.hi[1] - g.y0) / g.cell), 0, g.ny - 1);
        for (int ix = ix0; ix <= ix1; ++ix)
            for (int iy = iy0; iy <= iy1; ++iy)
                g.bins[static_cast<std::size_t>(ix) * g.ny + iy].push_back(t);
    }
}

}  // namespace detail

// Validates, builds edge adjacency + vertex incidence + location grid.
inline TriSurface make_surface(int dim, SurfaceKind kind, std::vector<Point> verts,
                               std::vector<std::array<int, 3>> tris) {
    require(dim == 2 || dim == 3, "surface dimension must be 2 or 3");
    TriSurface S;
    S.dim = dim;
    S.kind = kind;
    S.verts = std::move(verts);
    S.tris = std::move(tris);
    require(!S.verts.empty() && !S.tris.empty(), "empty surface");
    int nv = static_cast<int>(S.verts.size());
    for (const auto& p : S.verts) require(p.dim == dim, "surface vertex dimension mismatch");
    S.vert_tris.assign(nv, {});
    std::map<std::pair<int, int>, std::pair<int, int>> emap;  // (u<v) -> (t0, t1)
    for (int t = 0; t < S.ntris(); ++t) {
        const auto& tri = S.tris[t];
        for (int j = 0; j < 3; ++j) {
            require(tri[j] >= 0 && tri[j] < nv, "triangle index out of range");
            require(tri[j] != tri[(j + 1) % 3], "triangle with repeated vertex");
            S.vert_tris[tri[j]].push_back(t);
        }
        require(!triangle_degenerate(S.triangle(t)), "degenerate (zero-area) triangle");
        if (kind == SurfaceKind::terrain) {
            Triangle g = S.triangle(t);
            g.a.z = g.b.z = g.c.z = 0;
            require(!triangle_degenerate(g), "terrain triangle projects to a degenerate one");
        }
        for (int j = 0; j < 3; ++j) {
            int u = tri[j], v = tri[(j + 1) % 3];
            auto key = std::minmax(u, v);
            auto it = emap.find(key);
            if (it == emap.end())
                emap[key] = {t, -1};
            else {
                require(it->second.second == -1, "edge shared by more than two triangles");
                it->second.second = t;
            }
        }
    }
    std::map<std::pair<int, int>, int> eid;
    for (const auto& [k, ts] : emap) {
        eid[k] = static_cast<int>(S.edges.size());
        S.edges.push_back({k.first, k.second, ts.first, ts.second});
    }
    S.tri_edge.assign(S.ntris(), {-1, -1, -1});
    for (int t = 0; t < S.ntris(); ++t)
        for (int j = 0; j < 3; ++j) {
            auto key = std::minmax(S.tris[t][j], S.tris[t][(j + 1) % 3]);
            S.tri_edge[t][j] = eid[key];
        }
    // orientation consistency: a shared edge must be traversed in opposite
    // directions by its two triangles
    std::map<std::pair<int, int>, int> dir_count;
    for (int t = 0; t < S.ntris(); ++t)
        for (int j = 0; j < 3; ++j) {
            int u = S.tris[t][j], v = S.tris[t][(j + 1) % 3];
            dir_count[{u, v}]++;
        }
    for (const auto& [d, c] : dir_count) {
        require(c <= 1, "inconsistent triangle orientation on edge");
    }
    detail::build_grid(S);
    return S;
}

constexpr int LOCATE_OUTSIDE = -1;

// Lowest-id triangle whose closed region contains p, or LOCATE_OUTSIDE.
inline int locate(const Point& p, const TriSurface& S) {
    require(p.dim == S.dim, "dimension mismatch");
    const auto& g = S.grid;
    int best = LOCATE_OUTSIDE;
    if (g.nx == 0) return best;
    double px = rat_d(p.x), py = rat_d(p.y);
    int ix = static_cast<int>((px - g.x0) / g.cell);
    int iy = static_cast<int>((py - g.y0) / g.cell);
    if (ix < 0 || ix >= g.nx || iy < 0 || iy >= g.ny) return best;
    for (int t : g.bins[static_cast<std::size_t>(ix) * g.ny + iy]) {
        if (best != LOCATE_OUTSIDE && t >= best) continue;
        if (point_in_triangle(p, S.triangle(t))) best = t;
    }
    return best;
}

// All triangles containing p (used for edge walking).
inline std::vector<int> locate_all(const Point& p, const TriSurface& S) {
    require(p.dim == S.dim, "dimension mismatch");
    std::vector<int> out;
    const auto& g = S.grid;
    if (g.nx == 0) return out;
    double px = rat_d(p.x), py = rat_d(p.y);
    int ix = static_cast<int>((px - g.x0) / g.cell);
    int iy = static_cast<int>((py - g.y0) / g.cell);
    if (ix < 0 || ix >= g.nx || iy < 0 || iy >= g.ny) return out;
    for (int t : g.bins[static_cast<std::size_t>(ix) * g.ny + iy])
        if (point_in_triangle(p, S.triangle(t))) out.push_back(t);
    std::sort(out.begin(), out.end());
    return out;
}

// Whole segment on the surface?  Walks pieces of s through triangles; each
// piece must lie in some closed triangle.  Exact; grid only prefilters.
inline bool segment_on_surface(const Segment& s, const TriSurface& S) {
    // positions along s where it can change triangle: crossings with all
    // nearby triangle edges, plus endpoints
    std::vector<Rat> cuts;
    cuts.push_back(rat(0));
    cuts.push_back(rat(1));
    Point d = vsub(s.b, s.a);
    Rat dd = norm2(d);
    if (sgn(dd) == 0) return locate(s.a, S) != LOCATE_OUTSIDE;
    BBoxD sb = bbox_of_segment(s);
    for (std::size_t ei = 0; ei < S.edges.size(); ++ei) {
        Segment es = S.edge_segment(static_cast<int>(ei));
        if (!bbox_overlap(sb, bbox_of_segment(es))) continue;
        auto r = segment_pair_intersection(s, es);
        if (r.rel == SegRel::proper || r.rel == SegRel::touching) {
            Rat t = dot(vsub(*r.point, s.a), d) / dd;
            if (sgn(t) >= 0 && t <= 1) cuts.push_back(t);
        } else if (r.rel == SegRel::overlap) {
            // endpoints of the shared piece
            for (const Point* q : {&es.a, &es.b}) {
                Rat t = dot(vsub(*q, s.a), d) / dd;
                if (sgn(t) >= 0 && t <= 1) cuts.push_back(t);
            }
        }
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Point mid = s.eval((cuts[i] + cuts[i + 1]) / 2);
        if (locate(mid, S) == LOCATE_OUTSIDE) return false;
    }
    return locate(s.a, S) != LOCATE_OUTSIDE && locate(s.b, S) != LOCATE_OUTSIDE;
}

}  // namespace curvembed
