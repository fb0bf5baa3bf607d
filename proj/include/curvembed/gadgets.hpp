#pragma once

// Crossing-gadget templates and their calibration.
//
// A crossing gadget ("base tile") is a pair of wedge-shaped barriers flanking a
// narrow waist, together with two straight signal curves whose corridors enter
// the waist from interleaved directions.  Any pair of embedded curves that stay
// within tolerance of the two signal curves must cross each other; each signal
// curve alone embeds trivially.  The barriers are realized three ways:
//   - frechet_holes:  wedges are removed from the surface (holes),
//   - frechet_plane:  wedges are simulated by pinned barrier curves (the
//                     surface stays a plain disk),
//   - weak_terrain:   wedges become deep trenches sunk into the surface.
// calibrate_base() certifies, on a discretized model of the reachable region,
// that the template really is exclusive (no non-crossing pair) and passable
// (each curve alone embeds), and audits the declared corridor widths against
// the geometry.

#include <algorithm>
#include <array>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "curvembed/common.hpp"
#include "curvembed/frechet.hpp"
#include "curvembed/geom.hpp"
#include "curvembed/rational.hpp"

namespace curvembed {

enum class GadgetMode { frechet_holes, frechet_plane, weak_terrain };

inline const char* mode_name(GadgetMode m) {
    switch (m) {
        case GadgetMode::frechet_holes: return "frechet-holes";
        case GadgetMode::frechet_plane: return "frechet-plane";
        case GadgetMode::weak_terrain: return "weak-terrain";
    }
    return "?";
}

inline GadgetMode mode_from_name(const std::string& s) {
    if (s == "frechet-holes" || s == "holes") return GadgetMode::frechet_holes;
    if (s == "frechet-plane" || s == "plane") return GadgetMode::frechet_plane;
    if (s == "weak-terrain" || s == "terrain") return GadgetMode::weak_terrain;
    throw Error("unknown gadget mode: " + s);
}

// All construction dimensions are integer multiples of the grid unit u=eps/32.
// corridor_w / clause_corridor_w are declared clear-passage demands audited by
// calibration against the waist gaps the geometry actually provides.
struct GadgetParams {
    Rat eps;                // instance tolerance (> 0)
    Rat u;                  // grid unit, eps/32
    Rat lane;               // strand lane spacing inside a street, eps/4
    Rat hole_slab_w;        // width of the long street barrier slab, eps/16
    Rat corridor_w;         // demanded clear waist passage, eps/2
    Rat clause_corridor_w;  // demanded clause waist passage (narrower), eps/4
    Rat spacing;            // minimum center distance between gadget regions, 10*eps
    Rat zig_len;            // total added stroke length of a barrier-curve zigzag, 3*eps
    Rat zig_amp;            // zigzag amplitude, eps/32
    Rat valley_w;           // trench floor clearance parameter, eps/8 (< eps/4)
    Rat valley_depth;       // trench depth, 4*eps
    Rat clause_depth;       // deepened trench depth inside clause tiles, 8*eps
    Rat wall_w;             // trench wall band thickness, eps/16
};

inline GadgetParams make_params(const Rat& eps) {
    require(sgn(eps) > 0, "tolerance must be positive");
    GadgetParams p;
    p.eps = eps;
    p.u = eps / rat(32);
    p.lane = eps / rat(4);
    p.hole_slab_w = eps / rat(16);
    p.corridor_w = eps / rat(2);
    p.clause_corridor_w = eps / rat(4);
    p.spacing = rat(10) * eps;
    p.zig_len = rat(3) * eps;
    p.zig_amp = eps / rat(32);
    p.valley_w = eps / rat(8);
    p.valley_depth = rat(4) * eps;
    p.clause_depth = rat(8) * eps;
    p.wall_w = eps / rat(16);
    return p;
}

// Hard structural invariants; geometric fitness is checked by calibration.
inline void validate_params(const GadgetParams& p) {
    require(sgn(p.eps) > 0, "tolerance must be positive");
    for (const Rat* r : {&p.u, &p.lane, &p.hole_slab_w, &p.corridor_w, &p.clause_corridor_w,
                         &p.spacing, &p.zig_len, &p.zig_amp, &p.valley_w, &p.valley_depth,
                         &p.clause_depth, &p.wall_w})
        require(sgn(*r) > 0, "gadget parameters must be positive");
    require(p.clause_corridor_w < p.corridor_w, "clause corridor must be narrower");
    require(p.valley_w * rat(4) < p.eps, "trench clearance must stay below eps/4");
    require(p.valley_depth > rat(2) * p.eps, "trench depth must exceed 2*eps");
    require(p.clause_depth >= p.valley_depth, "clause trench may not be shallower");
    require(p.hole_slab_w * rat(2) <= p.lane, "street slab must fit between lanes");
    require(p.zig_amp * rat(8) <= p.eps, "zigzag amplitude too large");
}

// ---------------------------------------------------------------------------
// Tile geometry.
//
// A tile centered at C with apex clearance h and top reach Y consists of two
// wedge barriers (apexes at C.y +- h pointing at each other, bases at
// C.y +- Y), four corner portals, the two interleaved waist chords, and bypass
// detours over each wedge.  The isolated template uses h = 12u; assembly-scale
// tiles use h = 6u (standard) or 3u (narrow clause flavor).

struct TileGeom {
    Point center;
    Rat h;                   // apex clearance from the center line
    Rat topy;                // wedge base offset from the center line
    Rat halfx;               // portal x offset
    Triangle wedgeN, wedgeS;         // barrier wedges
    Point wn, en, ws, es;            // corner portals
    std::vector<Point> chordA;       // wn -> es (through the waist)
    std::vector<Point> chordB;       // ws -> en (through the waist)
    std::vector<Point> detourN;      // wn -> en over the north wedge
    std::vector<Point> detourS;      // ws -> es under the south wedge
};

inline TileGeom make_tile_at(const GadgetParams& p, const Point& c, const Rat& h,
                             const Rat& topy, const Rat& halfx) {
    TileGeom t;
    t.center = c;
    t.h = h;
    t.topy = topy;
    t.halfx = halfx;
    Rat bw = topy - h;  // wedge base half-width
    t.wedgeN = Triangle{pt(c.x, c.y + h), pt(c.x - bw, c.y + topy), pt(c.x + bw, c.y + topy)};
    t.wedgeS = Triangle{pt(c.x, c.y - h), pt(c.x + bw, c.y - topy), pt(c.x - bw, c.y - topy)};
    t.wn = pt(c.x - halfx, c.y + h);
    t.en = pt(c.x + halfx, c.y + h);
    t.ws = pt(c.x - halfx, c.y - h);
    t.es = pt(c.x + halfx, c.y - h);
    t.chordA = {t.wn, t.es};
    t.chordB = {t.ws, t.en};
    Rat peak = topy + h;
    t.detourN = {t.wn, pt(c.x - halfx, c.y + peak), pt(c.x + halfx, c.y + peak), t.en};
    t.detourS = {t.ws, pt(c.x - halfx, c.y - peak), pt(c.x + halfx, c.y - peak), t.es};
    return t;
}

// Assembly-scale tile: fits inside the eps-tube of the strand it couples.
inline TileGeom make_tile(const GadgetParams& p, const Point& center, bool narrow) {
    Rat u = p.u;
    if (narrow) return make_tile_at(p, center, rat(3) * u, rat(16) * u, rat(16) * u);
    return make_tile_at(p, center, rat(6) * u, rat(20) * u, rat(20) * u);
}

// ---------------------------------------------------------------------------
// Isolated crossing gadget.

struct BaseGadget {
    GadgetMode mode;
    Rat eps;
    PolyCurve a1, a2;                        // signal curve templates
    std::vector<Triangle> holes;             // barrier wedges (holes / trench footprints)
    std::vector<PolyCurve> barrier_curves;   // plane mode: pinned barrier loops
    Rat trench_depth;                        // terrain mode
    Rat wall_band;                           // terrain wall band fraction denominator source
    Point bb_lo, bb_hi;                      // bounding box of the construction
};

namespace detail {

// Append a double-back zigzag to pts, dipping from (x0,ytop) toward the wedge
// interior.  Four strokes of zig_len/4 each, amplitude zig_amp, walking from
// x0 westward; sgn = +1 dips downward (north wedge), -1 upward (south wedge).
inline void append_zigzag(std::vector<Point>& pts, const GadgetParams& p, const Rat& x0,
                          const Rat& ytop, int dir) {
    Rat depth = p.zig_len / rat(4);
    Rat ylow = dir > 0 ? Rat(ytop - depth) : Rat(ytop + depth);
    Rat x = x0;
    for (int s = 0; s < 2; ++s) {
        pts.push_back(pt(x, ytop));
        pts.push_back(pt(x, ylow));
        x -= p.zig_amp;
        pts.push_back(pt(x, ylow));
        pts.push_back(pt(x, ytop));
        x -= p.zig_amp;
    }
}

// Closed barrier loop tracing a wedge boundary, pinned by a zigzag on the base
// edge so its embeddings cannot drift away from the simulated barrier.
inline PolyCurve barrier_loop(const GadgetParams& p, const Triangle& w) {
    // w = {apex, baseFar, baseNear} as built by make_tile_at (ccw north wedge:
    // apex, west top, east top; south wedge mirrored).
    bool north = w.b.y > w.a.y;
    std::vector<Point> pts;
    pts.push_back(w.b);
    pts.push_back(w.a);
    pts.push_back(w.c);
    Rat ytop = w.b.y;
    Rat x0 = (w.b.x + w.c.x) / rat(2) + rat(2) * p.u;
    append_zigzag(pts, p, x0, ytop, north ? +1 : -1);
    pts.push_back(w.b);
    return make_curve(std::move(pts));
}

}  // namespace detail

// Build the isolated crossing gadget at translation `pose`.  In terrain mode
// the signal curves live at z=0 on a surface whose wedge footprints are sunk
// to trench_depth; `narrow` selects the clause flavor with a tighter waist.
inline BaseGadget build_base(const GadgetParams& p, GadgetMode mode, const Point& pose,
                             bool narrow = false) {
    validate_params(p);
    Rat u = p.u;
    Rat L = rat(48) * u;                       // signal arm reach
    Rat h = (narrow ? rat(9) : rat(12)) * u;   // apex clearance
    Rat topy = h + rat(68) * u;                // wedge base offset
    TileGeom t = make_tile_at(p, pt(pose.x, pose.y), h, topy, L);

    BaseGadget b;
    b.mode = mode;
    b.eps = p.eps;
    b.trench_depth = narrow ? p.clause_depth : p.valley_depth;
    b.wall_band = p.wall_w;
    auto mk = [&](const Rat& x0, const Rat& y0, const Rat& x1, const Rat& y1) {
        if (mode == GadgetMode::weak_terrain)
            return make_curve({pt3(pose.x + x0, pose.y + y0, rat(0)),
                               pt3(pose.x + x1, pose.y + y1, rat(0))});
        return make_curve({pt(pose.x + x0, pose.y + y0), pt(pose.x + x1, pose.y + y1)});
    };
    b.a1 = mk(-L, L, L, -L);
    b.a2 = mk(-L, -L, L, L);
    b.holes.push_back(t.wedgeN);
    b.holes.push_back(t.wedgeS);
    if (mode == GadgetMode::frechet_plane) {
        b.barrier_curves.push_back(detail::barrier_loop(p, t.wedgeN));
        b.barrier_curves.push_back(detail::barrier_loop(p, t.wedgeS));
    }
    Rat reach = L + p.eps + rat(8) * u;
    Rat tall = topy + h;
    if (tall < reach) tall = reach;
    b.bb_lo = pt(pose.x - reach, pose.y - tall);
    b.bb_hi = pt(pose.x + reach, pose.y + tall);
    return b;
}

// ---------------------------------------------------------------------------
// Calibration.

struct BaseCalibration {
    bool fits = false;        // declared corridor widths fit the waist gaps
    bool exclusive = false;   // no non-crossing pair of valid embeddings
    bool passable1 = false, passable2 = false;  // each curve alone embeds
    PolyCurve path1, path2;   // passability witnesses
    std::string detail;       // failure notes
    bool ok() const { return fits && exclusive && passable1 && passable2; }
};

namespace detail {

// Trench depth under a 2D point for a set of wedge footprints: 0 outside, full
// depth on the floor, linear ramp across a wall band that is a fixed fraction
// of the wedge (scaled toward its centroid), all rational.
inline Rat trench_height(const Point& q, const std::vector<Triangle>& wedges, const Rat& depth) {
    const Rat band = rat(1, 16);
    Rat best = rat(0);
    for (const Triangle& w : wedges) {
        if (!point_in_triangle(pt(q.x, q.y), w)) continue;
        Point cen = pt((w.a.x + w.b.x + w.c.x) / rat(3), (w.a.y + w.b.y + w.c.y) / rat(3));
        // s = min over edges of g(q)/g(centroid): 0 on the boundary, 1 at the centroid.
        Rat s = rat(1);
        const Point* vs[3] = {&w.a, &w.b, &w.c};
        for (int e = 0; e < 3; ++e) {
            const Point& A = *vs[e];
            const Point& B = *vs[(e + 1) % 3];
            Rat gq = cross2(vsub(B, A), vsub(pt(q.x, q.y), A));
            Rat gc = cross2(vsub(B, A), vsub(cen, A));
            if (sgn(gc) < 0) { gq = -gq; gc = -gc; }
            require(sgn(gc) > 0, "degenerate barrier wedge");
            Rat r = gq / gc;
            if (r < s) s = r;
        }
        if (sgn(s) < 0) s = rat(0);
        Rat d = s >= band ? depth : depth * s / band;
        if (d > best) best = d;
    }
    return -best;
}

struct CalGrid {
    Rat step, x0, y0;
    int nx = 0, ny = 0;
    std::vector<char> free_cell;           // nx*ny
    int idx(int i, int j) const { return j * nx + i; }
    Point at(int i, int j) const { return pt(x0 + step * rat(i), y0 + step * rat(j)); }
};

inline std::vector<int> bfs_path(const CalGrid& g, const std::vector<char>& allowed,
                                 const std::vector<char>& src, const std::vector<char>& dst) {
    std::vector<int> prev(allowed.size(), -2);
    std::queue<int> q;
    for (std::size_t k = 0; k < allowed.size(); ++k)
        if (allowed[k] && src[k]) { prev[k] = -1; q.push(static_cast<int>(k)); }
    int hit = -1;
    while (!q.empty() && hit < 0) {
        int k = q.front(); q.pop();
        if (dst[k]) { hit = k; break; }
        int i = k % g.nx, j = k / g.nx;
        const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
            int ii = i + di[d], jj = j + dj[d];
            if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
            int kk = g.idx(ii, jj);
            if (!allowed[kk] || prev[kk] != -2) continue;
            prev[kk] = k;
            q.push(kk);
        }
    }
    std::vector<int> path;
    for (int k = hit; k >= 0; k = prev[k]) path.push_back(k);
    std::reverse(path.begin(), path.end());
    return path;
}

// Exact: does a 2D segment meet the closed triangle anywhere?
inline bool segment_hits_triangle(const Segment& s, const Triangle& w) {
    if (point_in_triangle(s.a, w) || point_in_triangle(s.b, w)) return true;
    for (Segment e : {Segment(w.a, w.b), Segment(w.b, w.c), Segment(w.c, w.a)})
        if (sgn(segment_segment_dist2(s, e)) == 0) return true;
    return false;
}

inline int flood(const CalGrid& g, const std::vector<char>& open, std::vector<int>& comp) {
    comp.assign(open.size(), -1);
    int nc = 0;
    for (std::size_t s = 0; s < open.size(); ++s) {
        if (!open[s] || comp[s] >= 0) continue;
        std::queue<int> q;
        comp[s] = nc;
        q.push(static_cast<int>(s));
        while (!q.empty()) {
            int k = q.front(); q.pop();
            int i = k % g.nx, j = k / g.nx;
            const int di[4] = {1, -1, 0, 0}, dj[4] = {0, 0, 1, -1};
            for (int d = 0; d < 4; ++d) {
                int ii = i + di[d], jj = j + dj[d];
                if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
                int kk = g.idx(ii, jj);
                if (!open[kk] || comp[kk] >= 0) continue;
                comp[kk] = comp[k];
                q.push(kk);
            }
        }
        ++nc;
    }
    return nc;
}

}  // namespace detail

// Certify the isolated crossing gadget on a discretized model of the region
// reachable by valid embeddings:
//   - passability: a breadth-first corridor search finds, for each signal curve
//     alone, a path verified against the curve by the matching decision;
//   - exclusivity: the reachable region is a topological disk, and the witness
//     path of either curve separates the endpoint zones of the other, so every
//     pair of valid embeddings must cross;
//   - fits: the declared corridor widths are within the waist gaps provided.
inline BaseCalibration calibrate_base(const GadgetParams& p, GadgetMode mode,
                                      bool narrow = false) {
    validate_params(p);
    BaseCalibration cal;
    Rat h = (narrow ? rat(9) : rat(12)) * p.u;
    cal.fits = (narrow ? p.clause_corridor_w : p.corridor_w) <= rat(2) * h;
    if (!cal.fits) cal.detail += "declared corridor exceeds the waist gap; ";

    BaseGadget b = build_base(p, mode, pt(0, 0), narrow);
    bool terrain = mode == GadgetMode::weak_terrain;
    Segment s1(pt(b.a1.v[0].x, b.a1.v[0].y), pt(b.a1.v[1].x, b.a1.v[1].y));
    Segment s2(pt(b.a2.v[0].x, b.a2.v[0].y), pt(b.a2.v[1].x, b.a2.v[1].y));
    Tol tol = tol_of_value(p.eps);

    detail::CalGrid g;
    g.step = rat(4) * p.u;
    Rat reach = rat(48) * p.u + p.eps + rat(8) * p.u;
    int n = 2 * 22 + 1;
    g.x0 = -reach + (reach * rat(2) - g.step * rat(n - 1)) / rat(2);
    g.y0 = g.x0;
    g.nx = g.ny = n;
    g.free_cell.assign(static_cast<std::size_t>(n) * n, 0);

    std::vector<char> hose1(g.free_cell.size(), 0), hose2(g.free_cell.size(), 0);
    std::vector<char> zone[4];
    for (auto& z : zone) z.assign(g.free_cell.size(), 0);
    std::vector<Rat> height(g.free_cell.size(), rat(0));

    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            int k = g.idx(i, j);
            Point q = g.at(i, j);
            Rat d1 = point_segment_dist2(q, s1);
            Rat d2 = point_segment_dist2(q, s2);
            if (terrain) {
                Rat z = detail::trench_height(q, b.holes, b.trench_depth);
                height[k] = z;
                Rat zz = z * z;
                d1 += zz;
                d2 += zz;
            } else {
                bool blocked = point_in_triangle(q, b.holes[0]) || point_in_triangle(q, b.holes[1]);
                if (blocked) continue;
            }
            // Strictly inside the tolerance tube: cells at exactly the
            // tolerance are boundary tips that the grid cannot resolve.
            hose1[k] = d1 < tol.sq;
            hose2[k] = d2 < tol.sq;
            if (!hose1[k] && !hose2[k]) continue;
            g.free_cell[k] = 1;
            const Point* ends[4] = {&b.a1.v[0], &b.a1.v[1], &b.a2.v[0], &b.a2.v[1]};
            for (int z = 0; z < 4; ++z) {
                Rat dz = dist2(q, pt(ends[z]->x, ends[z]->y));
                if (dz <= tol.sq) zone[z][k] = 1;
            }
        }
    }

    // Region must be one connected piece with no enclosed lakes (disk).
    std::vector<int> comp;
    int nfree = detail::flood(g, g.free_cell, comp);
    bool disk = nfree == 1;
    if (!disk) cal.detail += "reachable region is not connected; ";
    std::vector<char> blocked_open(g.free_cell.size(), 0);
    for (std::size_t k = 0; k < g.free_cell.size(); ++k) blocked_open[k] = !g.free_cell[k];
    std::vector<int> bcomp;
    int nblk = detail::flood(g, blocked_open, bcomp);
    std::vector<char> touches(nblk, 0);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            if ((i == 0 || j == 0 || i == g.nx - 1 || j == g.ny - 1) && blocked_open[g.idx(i, j)])
                touches[bcomp[g.idx(i, j)]] = 1;
    for (int c = 0; c < nblk; ++c)
        if (!touches[c]) {
            disk = false;
            cal.detail += "reachable region encloses a lake; ";
            break;
        }

    // Passability: corridor path for each curve alone, then verify it.
    auto find_path = [&](const std::vector<char>& hose, const Segment& s, const PolyCurve& a,
                         const std::vector<char>& zs, const std::vector<char>& ze,
                         PolyCurve& out, std::vector<int>& cells) -> bool {
        std::vector<char> allowed(g.free_cell.size(), 0);
        for (std::size_t k = 0; k < allowed.size(); ++k) allowed[k] = g.free_cell[k] && hose[k];
        cells = detail::bfs_path(g, allowed, zs, ze);
        if (cells.empty()) return false;
        std::vector<Point> pts;
        for (int k : cells) {
            int i = k % g.nx, j = k / g.nx;
            Point q = g.at(i, j);
            Point w = terrain ? pt3(q.x, q.y, height[k]) : q;
            if (pts.empty() || pts.back() != w) pts.push_back(w);
        }
        if (pts.size() >= 2) {
            PolyCurve cand = make_curve(pts);
            if (curve_frechet_decide(a, cand, tol, /*weak=*/terrain)) {
                out = cand;
                return true;
            }
        }
        // The straight template itself, when it clears every barrier, is a
        // valid embedding at distance zero.
        for (const Triangle& w : b.holes)
            if (detail::segment_hits_triangle(s, w)) return false;
        out = a;
        return true;
    };
    std::vector<int> cells1, cells2;
    cal.passable1 = find_path(hose1, s1, b.a1, zone[0], zone[1], cal.path1, cells1);
    cal.passable2 = find_path(hose2, s2, b.a2, zone[2], zone[3], cal.path2, cells2);
    if (!cal.passable1) cal.detail += "no valid corridor for the first signal curve; ";
    if (!cal.passable2) cal.detail += "no valid corridor for the second signal curve; ";

    // Extend a witness path beyond its endpoints to the rim of the reachable
    // region (staircase walk in the given direction), so that removing it
    // leaves no gap for a flood to slip around its tips.
    auto extend_to_rim = [&](std::vector<int> cells, int sx0, int sy0, int sx1, int sy1) {
        auto grow = [&](int from, int sx, int sy) {
            int i = from % g.nx, j = from / g.nx;
            for (int guard = 0; guard < g.nx + g.ny; ++guard) {
                bool moved = false;
                for (auto [di, dj] : {std::pair<int, int>{sx, 0}, {0, sy}}) {
                    if (di == 0 && dj == 0) continue;
                    int ii = i + di, jj = j + dj;
                    if (ii < 0 || jj < 0 || ii >= g.nx || jj >= g.ny) continue;
                    if (!g.free_cell[g.idx(ii, jj)]) continue;
                    i = ii; j = jj;
                    cells.push_back(g.idx(i, j));
                    moved = true;
                    break;
                }
                if (!moved) break;
            }
        };
        if (!cells.empty()) {
            grow(cells.front(), sx0, sy0);
            grow(cells.back(), sx1, sy1);
        }
        return cells;
    };

    // Exclusivity: removing either witness path separates the other curve's
    // endpoint zones inside the disk, so the zones interleave on the boundary
    // and every pair of valid embeddings crosses.
    auto separates = [&](const std::vector<int>& cells, const std::vector<char>& zs,
                         const std::vector<char>& ze) -> bool {
        if (cells.empty()) return false;
        std::vector<char> open = g.free_cell;
        for (int k : cells) open[k] = 0;
        std::vector<int> c2;
        detail::flood(g, open, c2);
        int src = -1;
        bool have_dst = false;
        for (std::size_t k = 0; k < open.size(); ++k) {
            if (!open[k]) continue;
            if (zs[k] && src < 0) src = c2[k];
            if (ze[k]) have_dst = true;
        }
        if (src < 0 || !have_dst) return false;  // a zone was swallowed: inconclusive
        for (std::size_t k = 0; k < open.size(); ++k)
            if (open[k] && ze[k] && c2[k] == src) return false;
        return true;
    };
    std::vector<int> bar1 = extend_to_rim(cells1, -1, +1, +1, -1);
    std::vector<int> bar2 = extend_to_rim(cells2, -1, -1, +1, +1);
    cal.exclusive = disk && separates(bar1, zone[2], zone[3]) && separates(bar2, zone[0], zone[1]);
    if (disk && !cal.exclusive) cal.detail += "witness paths do not separate the opposing zones; ";
    return cal;
}

}  // namespace curvembed
