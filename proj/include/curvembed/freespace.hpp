#pragma once
#include <string>
#include <vector>

#include "surface.hpp"

namespace curvembed {

// Closed subinterval of [0,1] with exact (possibly irrational) endpoints.
struct Interval1 {
    bool empty = true;
    Quad lo, hi;
};

inline Interval1 interval_of(const Quad& lo, const Quad& hi) {
    if (quad_cmp(lo, hi) > 0) return {};
    return {false, lo, hi};
}

inline Interval1 interval_from(const std::optional<std::pair<Quad, Quad>>& p) {
    if (!p) return {};
    return {false, p->first, p->second};
}

inline Interval1 interval_intersect(const Interval1& a, const Interval1& b) {
    if (a.empty || b.empty) return {};
    return interval_of(quad_max(a.lo, b.lo), quad_min(a.hi, b.hi));
}

inline Interval1 interval_hull(const Interval1& a, const Interval1& b) {
    if (a.empty) return b;
    if (b.empty) return a;
    return {false, quad_min(a.lo, b.lo), quad_max(a.hi, b.hi)};
}

inline bool interval_contains(const Interval1& a, const Quad& x) {
    return !a.empty && quad_cmp(a.lo, x) <= 0 && quad_cmp(x, a.hi) <= 0;
}

namespace detail {

// {s in [0,1] : dist(seg(s), line through e)^2 <= eps^2 and the foot of the
// perpendicular falls inside e}.  One convex piece of an edge-face's
// s-projection.
inline Interval1 line_piece(const Segment& seg, const Segment& e, const Tol& eps) {
    Point v = vsub(seg.b, seg.a), d = vsub(e.b, e.a), w0 = vsub(seg.a, e.a);
    Rat dd = norm2(d);
    if (sgn(dd) == 0) return {};  // degenerate edge: endpoint pieces cover it
    Rat a0 = dot(w0, d), a1 = dot(v, d);
    // foot condition 0 <= a0 + s*a1 <= dd
    Interval1 foot;
    if (sgn(a1) == 0) {
        if (sgn(a0) >= 0 && a0 <= dd) foot = interval_of(Quad(Rat(0)), Quad(Rat(1)));
        else return {};
    } else {
        Rat f0 = -a0 / a1, f1 = (dd - a0) / a1;
        if (f0 > f1) std::swap(f0, f1);
        foot = interval_of(Quad(f0), Quad(f1));
    }
    // scaled squared line distance: dd*|w|^2 - (w.d)^2 <= dd*eps^2,
    // w(s) = w0 + s v
    Rat A = dd * norm2(v) - a1 * a1;
    Rat B = 2 * (dd * dot(w0, v) - a0 * a1);
    Rat C = dd * norm2(w0) - a0 * a0 - dd * eps.sq;
    Interval1 q;
    if (sgn(A) == 0) {
        if (sgn(B) == 0)
            q = sgn(C) <= 0 ? interval_of(Quad(Rat(0)), Quad(Rat(1))) : Interval1{};
        else {
            Rat s0 = -C / B;
            q = sgn(B) > 0 ? interval_of(Quad(Rat(0)), Quad(s0))
                           : interval_of(Quad(s0), Quad(Rat(1)));
        }
    } else {
        Rat disc = B * B - 4 * A * C;
        if (sgn(disc) < 0) return {};
        auto [lo, hi] = quad_roots(A, B, C);
        q = interval_of(lo, hi);
    }
    Interval1 unit = interval_of(Quad(Rat(0)), Quad(Rat(1)));
    return interval_intersect(interval_intersect(q, foot), unit);
}

}  // namespace detail

// The free region of one boundary face (curve segment x surface edge):
// {(s,u) : |seg(s) - e(u)| <= eps}, convex.  Stored by its two axis
// projections; membership is recomputed exactly on demand.
struct FaceRegion {
    Interval1 s, u;
    bool empty() const { return s.empty; }
};

inline Interval1 edge_face_s_interval(const Segment& seg, const Segment& e, const Tol& eps) {
    Interval1 out = interval_from(free_interval(e.a, seg, eps));
    out = interval_hull(out, interval_from(free_interval(e.b, seg, eps)));
    out = interval_hull(out, detail::line_piece(seg, e, eps));
    return out;
}

inline FaceRegion face_region(const Segment& seg, const Segment& e, const Tol& eps) {
    FaceRegion r;
    r.s = edge_face_s_interval(seg, e, eps);
    r.u = edge_face_s_interval(e, seg, eps);
    return r;
}

// Exact membership test for rational parameters.
inline bool face_region_contains(const Segment& seg, const Segment& e, const Tol& eps,
                                 const Rat& s, const Rat& u) {
    return dist2(seg.eval(s), e.eval(u)) <= eps.sq;
}

namespace detail {

// {s in [0,1] : alpha*s + beta >= 0} as an interval
inline Interval1 linear_ge_interval(const Rat& alpha, const Rat& beta) {
    if (sgn(alpha) == 0)
        return sgn(beta) >= 0 ? interval_of(Quad(Rat(0)), Quad(Rat(1))) : Interval1{};
    Rat bound = -beta / alpha;
    if (sgn(alpha) > 0)
        return interval_of(quad_max(Quad(Rat(0)), Quad(bound)), Quad(Rat(1)));
    return interval_of(Quad(Rat(0)), quad_min(Quad(Rat(1)), Quad(bound)));
}

}  // namespace detail

// Projection of a free cell (curve segment x triangle at radius eps) onto the
// curve parameter: the set {s : dist(f(s), tri) <= eps}, an interval by
// convexity of the cell.  Computed as the hull of the per-edge intervals and
// the interval where the closest point is interior to the triangle; the union
// of those pieces is exactly the projection, so its hull equals it.
inline Interval1 cell_s_interval(const Segment& fseg, const Triangle& tri, const Tol& eps) {
    Interval1 out;
    Segment edges[3] = {Segment(tri.a, tri.b), Segment(tri.b, tri.c), Segment(tri.c, tri.a)};
    for (const Segment& e : edges) out = interval_hull(out, edge_face_s_interval(fseg, e, eps));
    // interior-closest piece: the perpendicular foot on the triangle's plane
    // falls inside it and the plane distance is within eps
    Point u = vsub(fseg.b, fseg.a);
    Point ab = vsub(tri.b, tri.a), ac = vsub(tri.c, tri.a);
    Point n = cross(ab, ac);
    Rat nn = norm2(n);
    if (sgn(nn) != 0) {
        // foot(s) = x(s) - ((x(s)-a).n / nn) n; its barycentric coordinates
        // are linear in s because projection is affine
        Point w0 = vsub(fseg.a, tri.a);
        Rat c0 = dot(w0, n), c1 = dot(u, n);  // plane offset = c0 + c1 s
        // foot-in-triangle: barycentric of foot w.r.t. (ab, ac); the normal
        // component cancels, so use the projected vector directly
        Rat d00 = norm2(ab), d01 = dot(ab, ac), d11 = norm2(ac);
        Rat den = d00 * d11 - d01 * d01;
        // w(s) = w0 + s u - ((c0 + c1 s)/nn) n ; dot with ab, ac is linear
        // (n.ab = n.ac = 0, so the normal part drops out of the dots)
        Rat e0a = dot(w0, ab), e1a = dot(u, ab);
        Rat e0c = dot(w0, ac), e1c = dot(u, ac);
        // v = (d11*(w.ab) - d01*(w.ac))/den, t = (d00*(w.ac) - d01*(w.ab))/den
        Rat va = (d11 * e0a - d01 * e0c) / den, vb = (d11 * e1a - d01 * e1c) / den;
        Rat ta = (d00 * e0c - d01 * e0a) / den, tb = (d00 * e1c - d01 * e1a) / den;
        Interval1 inside = interval_of(Quad(Rat(0)), Quad(Rat(1)));
        inside = interval_intersect(inside, detail::linear_ge_interval(vb, va));
        inside = interval_intersect(inside, detail::linear_ge_interval(tb, ta));
        inside = interval_intersect(inside, detail::linear_ge_interval(-(vb + tb), 1 - va - ta));
        // plane distance: (c0 + c1 s)^2 <= eps^2 * nn
        if (!inside.empty) {
            Quad E = quad_sqrt(eps.sq * nn);
            Interval1 plane;
            if (sgn(c1) == 0) {
                if (quad_cmp(Quad(rat_abs(c0) * rat_abs(c0)), Quad(eps.sq * nn)) <= 0)
                    plane = interval_of(Quad(Rat(0)), Quad(Rat(1)));
            } else {
                Quad lo = quad_scale(Rat(1) / c1, quad_add(quad_neg(E), Quad(-c0)));
                Quad hi = quad_scale(Rat(1) / c1, quad_add(E, Quad(-c0)));
                if (quad_cmp(lo, hi) > 0) std::swap(lo, hi);
                plane = interval_intersect(interval_of(lo, hi),
                                           interval_of(Quad(Rat(0)), Quad(Rat(1))));
            }
            out = interval_hull(out, interval_intersect(inside, plane));
        }
    }
    return out;
}

// Counters for the complexity-scaling measurements: incremented by builders
// and by the embedding propagation.
struct Stats {
    long long cells_considered = 0;
    long long cells_free = 0;
    long long exact_solves = 0;   // faces/cells that needed exact arithmetic
    long long relax_updates = 0;  // monotone-propagation face updates
    long long slice_visits = 0;   // flood steps at curve-vertex slices
    long long total_visits() const {
        return cells_considered + relax_updates + slice_visits;
    }
};

// Per-curve-segment data: cell flags and face regions for one layer.
struct LayerFaces {
    std::vector<char> cell_free;    // [triangle]
    std::vector<Interval1> eface;   // [edge id]; only interior edges get regions
    std::vector<Interval1> vportal; // [vertex id]; portal through a mesh vertex
};

// Per-curve-vertex data: which triangles/edges/vertices of S lie within eps
// of the curve vertex (traversable while the curve parameter rests there).
struct SliceData {
    std::vector<char> vface;    // [triangle]: dist(v_i, tri) <= eps
    std::vector<char> edge_ok;  // [edge id]: dist(v_i, e) <= eps
    std::vector<char> vert_ok;  // [vertex id]: |v_i - w| <= eps
};

inline LayerFaces build_layer(const PolyCurve& f, int i, const TriSurface& S, const Tol& eps,
                              Stats& st) {
    LayerFaces L;
    Segment seg = f.seg(i);
    BBoxD segbox = bbox_of_segment(seg);
    double eps2d = rat_d(eps.sq);
    int T = S.ntris();
    L.cell_free.assign(T, 0);
    for (int t = 0; t < T; ++t) {
        ++st.cells_considered;
        if (bbox_farther_than(segbox, bbox_of_triangle(S.triangle(t)), eps2d)) continue;
        ++st.exact_solves;
        if (segment_triangle_dist2(seg, S.triangle(t)) <= eps.sq) {
            L.cell_free[t] = 1;
            ++st.cells_free;
        }
    }
    L.eface.assign(S.edges.size(), Interval1{});
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
        if (S.edges[e].t1 == -1) continue;  // boundary edge: no cell transition
        if (!L.cell_free[S.edges[e].t0] && !L.cell_free[S.edges[e].t1]) continue;
        Segment es = S.edge_segment(static_cast<int>(e));
        if (bbox_farther_than(segbox, bbox_of_segment(es), eps2d)) continue;
        ++st.exact_solves;
        L.eface[e] = edge_face_s_interval(seg, es, eps);
    }
    L.vportal.assign(S.verts.size(), Interval1{});
    for (std::size_t w = 0; w < S.verts.size(); ++w) {
        if (S.vert_tris[w].size() < 2) continue;
        BBoxD wb;
        wb.add(S.verts[w]);
        if (bbox_farther_than(segbox, wb, eps2d)) continue;
        ++st.exact_solves;
        L.vportal[w] = interval_from(free_interval(S.verts[w], seg, eps));
    }
    return L;
}

inline SliceData build_slice(const PolyCurve& f, int i, const TriSurface& S, const Tol& eps,
                             Stats& st) {
    SliceData D;
    const Point& v = f.v[i];
    BBoxD vb;
    vb.add(v);
    double eps2d = rat_d(eps.sq);
    D.vface.assign(S.ntris(), 0);
    for (int t = 0; t < S.ntris(); ++t) {
        if (bbox_farther_than(vb, bbox_of_triangle(S.triangle(t)), eps2d)) continue;
        ++st.exact_solves;
        if (point_triangle_dist2(v, S.triangle(t)) <= eps.sq) D.vface[t] = 1;
    }
    D.edge_ok.assign(S.edges.size(), 0);
    for (std::size_t e = 0; e < S.edges.size(); ++e) {
        if (S.edges[e].t1 == -1) continue;
        Segment es = S.edge_segment(static_cast<int>(e));
        if (bbox_farther_than(vb, bbox_of_segment(es), eps2d)) continue;
        if (point_segment_dist2(v, es) <= eps.sq) D.edge_ok[e] = 1;
    }
    D.vert_ok.assign(S.verts.size(), 0);
    for (std::size_t w = 0; w < S.verts.size(); ++w) {
        if (S.vert_tris[w].size() < 2) continue;
        if (dist2(v, S.verts[w]) <= eps.sq) D.vert_ok[w] = 1;
    }
    return D;
}

// The whole complex, materialized (debug dump, rendering, small inputs).
struct FreeComplex {
    const PolyCurve* f = nullptr;
    const TriSurface* S = nullptr;
    Tol eps{Rat(0)};
    std::vector<LayerFaces> layers;   // [segment i]
    std::vector<SliceData> slices;    // [curve vertex i], size m+1
    Stats stats;
};

inline FreeComplex build_complex(const PolyCurve& f, const TriSurface& S, const Tol& eps,
                                 long long max_cells = 5000000) {
    require(f.segments() >= 1, "empty curve");
    require(S.ntris() >= 1, "empty surface");
    require(f.dim() == S.dim, "dimension mismatch");
    long long cells = static_cast<long long>(f.segments()) * S.ntris();
    require(cells <= max_cells,
            "free-space complex too large: " + std::to_string(cells) + " cells (cap " +
                std::to_string(max_cells) + ")");
    FreeComplex C;
    C.f = &f;
    C.S = &S;
    C.eps = eps;
    for (int i = 0; i < f.segments(); ++i) C.layers.push_back(build_layer(f, i, S, eps, C.stats));
    for (int i = 0; i <= f.segments(); ++i) C.slices.push_back(build_slice(f, i, S, eps, C.stats));
    return C;
}

// Structured text dump, one line per cell/face (exact endpoints).
inline std::string dump_complex(const FreeComplex& C) {
    std::string out;
    const TriSurface& S = *C.S;
    for (std::size_t i = 0; i < C.layers.size(); ++i) {
        const LayerFaces& L = C.layers[i];
        for (int t = 0; t < S.ntris(); ++t)
            out += "cell " + std::to_string(i) + " " + std::to_string(t) + " " +
                   (L.cell_free[t] ? "free" : "blocked") + "\n";
        for (std::size_t e = 0; e < L.eface.size(); ++e) {
            if (L.eface[e].empty) continue;
            out += "edgeface " + std::to_string(i) + " " + std::to_string(e) + " s=[" +
                   quad_str(L.eface[e].lo) + ", " + quad_str(L.eface[e].hi) + "]\n";
        }
        for (std::size_t w = 0; w < L.vportal.size(); ++w) {
            if (L.vportal[w].empty) continue;
            out += "vportal " + std::to_string(i) + " " + std::to_string(w) + " s=[" +
                   quad_str(L.vportal[w].lo) + ", " + quad_str(L.vportal[w].hi) + "]\n";
        }
    }
    for (std::size_t i = 0; i < C.slices.size(); ++i) {
        const SliceData& D = C.slices[i];
        for (int t = 0; t < S.ntris(); ++t)
            if (D.vface[t])
                out += "vertexface " + std::to_string(i) + " " + std::to_string(t) + " free\n";
    }
    return out;
}

}  // namespace curvembed
