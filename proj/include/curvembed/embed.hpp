#pragma once
// Embedding a polygonal curve into a triangulated surface: decision procedures
// for the strong and weak continuous matching distances, witness construction,
// planar self-overlap removal, and a symmetric-distance variant that only has
// to stay near the input's image.

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet.hpp"
#include "freespace.hpp"
#include "surface.hpp"

namespace curvembed {

enum class EmbedMode { frechet, weak_frechet, hausdorff };

struct WitnessStep {
    Rat s;    // curve parameter in [0,1]
    Point q;  // matched point on the surface
    int tri;  // a triangle of the surface containing q
};

struct EmbedWitness {
    std::vector<WitnessStep> steps;

    // The polyline traced by the q's, with consecutive duplicates merged.
    PolyCurve induced_curve() const {
        std::vector<Point> v;
        for (const auto& st : steps)
            if (v.empty() || !(st.q == v.back())) v.push_back(st.q);
        require(v.size() >= 2, "witness image collapses to a point");
        return make_curve(std::move(v));
    }
};

// Default cap on the number of free-space cells (#segments x #triangles);
// overridable per call and via the CURVEMBED_MAX_CELLS environment variable.
inline long long default_max_cells() {
    if (const char* e = std::getenv("CURVEMBED_MAX_CELLS")) {
        long long v = std::atoll(e);
        if (v > 0) return v;
    }
    return 5000000;
}

namespace detail {

// Label of one surface triangle within one curve-segment layer of the
// monotone sweep.  m is the earliest in-layer parameter at which the sweep
// can occupy the triangle.  kind records how the label was produced:
//   1 rest-flood step from a neighbouring triangle (via: edge id, or -2-w for
//     a step through mesh vertex w)
//   2 crossing of interior edge `via` during the segment
//   3 crossing through mesh vertex `via` during the segment
//   4 carried over from the previous layer (same triangle)
//   5 initial triangle at the start of the curve
struct FaceLabel {
    bool reached = false;
    Quad m;
    char kind = 0;
    int pred = -1;
    int via = -1;
    long long stamp = 0;  // creation order; strictly decreases along pred chains
};

inline int other_tri(const SurfaceEdge& e, int t) { return e.t0 == t ? e.t1 : e.t0; }

}  // namespace detail

// Pick a rational number inside a (closed, nonempty) parameter interval.
inline Rat rational_in_interval(const Interval1& iv) {
    require(!iv.empty, "cannot pick from an empty interval");
    if (quad_cmp(iv.lo, iv.hi) == 0) {
        require(iv.lo.is_rational(),
                "parameter choice is pinned at an irrational value");
        return iv.lo.rational();
    }
    if (iv.lo.is_rational()) return iv.lo.rational();
    if (iv.hi.is_rational()) return iv.hi.rational();
    return rat_strictly_between(iv.lo, iv.hi);
}

// Strong continuous matching: does a curve within distance eps of f exist on S,
// traversed so that the parameter of f never decreases?  Returns a witness
// matching when one exists.
inline std::optional<EmbedWitness> embed_frechet(const PolyCurve& f, const TriSurface& S,
                                                 const Tol& eps, Stats* stats = nullptr,
                                                 long long max_cells = -1) {
    require(f.dim() == S.dim, "curve and surface dimensions differ");
    if (max_cells < 0) max_cells = default_max_cells();
    const int n = f.segments();
    const int T = S.ntris();
    require(static_cast<long long>(n) * T <= max_cells,
            "free-space complex exceeds the cell cap");
    Stats local;
    Stats& st = stats ? *stats : local;
    const Quad one(rat(1));

    std::vector<LayerFaces> layers;
    layers.reserve(n);
    std::vector<std::vector<detail::FaceLabel>> labels(n);
    long long stamp = 0;

    const std::vector<detail::FaceLabel>* prev = nullptr;
    for (int i = 0; i < n; ++i) {
        layers.push_back(build_layer(f, i, S, eps, st));
        const LayerFaces& L = layers.back();
        SliceData D = build_slice(f, i, S, eps, st);
        auto& lab = labels[i];
        lab.assign(T, {});

        // Entry: triangles occupied while the curve rests at vertex i.
        std::deque<int> flood;
        for (int t = 0; t < T; ++t) {
            if (!D.vface[t]) continue;
            if (i == 0) {
                lab[t].reached = true;
                lab[t].kind = 5;
            } else if ((*prev)[t].reached && quad_cmp((*prev)[t].m, one) <= 0) {
                lab[t].reached = true;
                lab[t].kind = 4;
                lab[t].pred = t;
            } else {
                continue;
            }
            lab[t].stamp = ++stamp;
            flood.push_back(t);
            ++st.slice_visits;
        }
        // Flood across triangles that stay within eps of vertex i: the matched
        // point may travel freely while the curve parameter rests there.
        while (!flood.empty()) {
            int t = flood.front();
            flood.pop_front();
            auto visit = [&](int t2, int via) {
                if (t2 < 0 || lab[t2].reached || !D.vface[t2]) return;
                lab[t2].reached = true;
                lab[t2].kind = 1;
                lab[t2].pred = t;
                lab[t2].via = via;
                lab[t2].stamp = ++stamp;
                flood.push_back(t2);
                ++st.slice_visits;
            };
            for (int e : S.tri_edge[t]) {
                if (S.edges[e].t1 == -1 || !D.edge_ok[e]) continue;
                visit(detail::other_tri(S.edges[e], t), e);
            }
            for (int w : S.tris[t]) {
                if (!D.vert_ok[w]) continue;
                for (int t2 : S.vert_tris[w])
                    if (t2 != t) visit(t2, -2 - w);
            }
        }

        // In-layer propagation: cross an edge or a mesh vertex at the earliest
        // parameter not below the current label.  Labels only ever decrease, so
        // the worklist terminates; the cap turns a logic error into a failure.
        std::deque<int> work;
        std::vector<char> inq(T, 0);
        for (int t = 0; t < T; ++t)
            if (lab[t].reached) {
                work.push_back(t);
                inq[t] = 1;
            }
        const long long cap =
            std::max<long long>(64, static_cast<long long>(T) * T);
        long long updates = 0;
        while (!work.empty()) {
            int t = work.front();
            work.pop_front();
            inq[t] = 0;
            auto relax = [&](int t2, const Interval1& iv, char kind, int via) {
                if (iv.empty || t2 < 0) return;
                Quad cand = quad_max(lab[t].m, iv.lo);
                if (quad_cmp(cand, iv.hi) > 0) return;
                if (lab[t2].reached && quad_cmp(lab[t2].m, cand) <= 0) return;
                lab[t2].reached = true;
                lab[t2].m = cand;
                lab[t2].kind = kind;
                lab[t2].pred = t;
                lab[t2].via = via;
                lab[t2].stamp = ++stamp;
                ++st.relax_updates;
                if (++updates > cap)
                    fail("in-layer propagation exceeded its iteration cap");
                if (!inq[t2]) {
                    work.push_back(t2);
                    inq[t2] = 1;
                }
            };
            for (int e : S.tri_edge[t]) {
                if (S.edges[e].t1 == -1) continue;
                relax(detail::other_tri(S.edges[e], t), L.eface[e], 2, e);
            }
            for (int w : S.tris[t])
                for (int t2 : S.vert_tris[w])
                    if (t2 != t) relax(t2, L.vportal[w], 3, w);
        }
        prev = &lab;
    }

    // Accept: some triangle within eps of the curve's endpoint is reachable by
    // the end of the last layer.
    SliceData Dend = build_slice(f, n, S, eps, st);
    int accept = -1;
    for (int t = 0; t < T; ++t)
        if (Dend.vface[t] && labels[n - 1][t].reached &&
            quad_cmp(labels[n - 1][t].m, one) <= 0) {
            accept = t;
            break;
        }
    if (accept < 0) return std::nullopt;

    // Reconstruct the label chain backwards.
    struct Ev {
        int layer;
        char kind;
        int face;
        int via;
        Quad m;
    };
    std::vector<Ev> chain;
    {
        int layer = n - 1, face = accept;
        long long last_stamp = stamp + 1;
        while (true) {
            const detail::FaceLabel& lb = labels[layer][face];
            require(lb.stamp < last_stamp, "label chain is not acyclic");
            last_stamp = lb.stamp;
            chain.push_back({layer, lb.kind, face, lb.via, lb.m});
            if (lb.kind == 5) break;
            if (lb.kind == 4) {
                --layer;
                continue;
            }
            face = lb.pred;
        }
    }
    std::reverse(chain.begin(), chain.end());

    // Choose rational crossing parameters, walking each layer backwards so the
    // picks are non-decreasing within the layer.
    std::vector<Rat> sv(chain.size(), rat(0));
    {
        Quad next(rat(1));
        int cur_layer = n - 1;
        for (int k = static_cast<int>(chain.size()) - 1; k >= 0; --k) {
            const Ev& ev = chain[k];
            if (ev.layer != cur_layer) {
                cur_layer = ev.layer;
                next = Quad(rat(1));
            }
            if (ev.kind != 2 && ev.kind != 3) continue;
            const LayerFaces& L = layers[ev.layer];
            const Interval1& iv = ev.kind == 2 ? L.eface[ev.via] : L.vportal[ev.via];
            Quad B = quad_min(iv.hi, next);
            const Quad& A = ev.m;
            int c = quad_cmp(A, B);
            require(c <= 0, "crossing window is empty");
            Rat pick;
            if (c == 0) {
                require(A.is_rational(),
                        "crossing parameter is pinned at an irrational value");
                pick = A.rational();
            } else {
                pick = rat_strictly_between(A, B);
            }
            sv[k] = pick;
            next = Quad(pick);
        }
    }

    // Emit the matching.
    EmbedWitness W;
    const Rat N = rat(n);
    auto add = [&](const Rat& s, const Point& q, int t) {
        W.steps.push_back({s, q, t});
    };
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const Ev& ev = chain[k];
        Rat base = rat(ev.layer);
        switch (ev.kind) {
            case 5:
            case 4:
                add(base / N, closest_point_on_triangle(f.v[ev.layer], S.triangle(ev.face)),
                    ev.face);
                break;
            case 1: {
                Point q = ev.via >= 0
                              ? closest_point_on_segment(f.v[ev.layer], S.edge_segment(ev.via))
                              : S.verts[-2 - ev.via];
                add(base / N, q, ev.face);
                break;
            }
            case 2: {
                Point fx = f.seg(ev.layer).eval(sv[k]);
                add((base + sv[k]) / N,
                    closest_point_on_segment(fx, S.edge_segment(ev.via)), ev.face);
                break;
            }
            case 3:
                add((base + sv[k]) / N, S.verts[ev.via], ev.face);
                break;
        }
    }
    add(rat(1), closest_point_on_triangle(f.v.back(), S.triangle(accept)), accept);
    return W;
}

// Weak continuous matching: the parameter of f may move back and forth.
// Reachability search over (segment, triangle) cells.
inline std::optional<EmbedWitness> embed_weak_frechet(const PolyCurve& f, const TriSurface& S,
                                                      const Tol& eps, Stats* stats = nullptr,
                                                      long long max_cells = -1) {
    require(f.dim() == S.dim, "curve and surface dimensions differ");
    if (max_cells < 0) max_cells = default_max_cells();
    const int n = f.segments();
    const int T = S.ntris();
    require(static_cast<long long>(n) * T <= max_cells,
            "free-space complex exceeds the cell cap");
    Stats local;
    Stats& st = stats ? *stats : local;

    std::vector<LayerFaces> layers;
    layers.reserve(n);
    for (int i = 0; i < n; ++i) layers.push_back(build_layer(f, i, S, eps, st));
    std::vector<SliceData> slices;
    slices.reserve(n + 1);
    for (int i = 0; i <= n; ++i) slices.push_back(build_slice(f, i, S, eps, st));

    struct Move {
        char kind = 0;  // 1 edge crossing, 2 vertex crossing, 3/4 slice up/down
        int via = -1;
    };
    struct Par {
        int pred = -2;  // -2 unvisited, -1 root
        Move mv;
    };
    std::vector<Par> par(static_cast<std::size_t>(n) * T);
    auto id = [&](int i, int t) { return i * T + t; };
    std::deque<int> queue;
    for (int t = 0; t < T; ++t)
        if (slices[0].vface[t]) {
            par[id(0, t)].pred = -1;
            queue.push_back(id(0, t));
        }
    int goal = -1;
    while (!queue.empty()) {
        int cur = queue.front();
        queue.pop_front();
        int i = cur / T, t = cur % T;
        ++st.relax_updates;
        if (i == n - 1 && slices[n].vface[t]) {
            goal = cur;
            break;
        }
        auto push = [&](int i2, int t2, char kind, int via) {
            int v = id(i2, t2);
            if (par[v].pred != -2) return;
            par[v].pred = cur;
            par[v].mv = {kind, via};
            queue.push_back(v);
        };
        const LayerFaces& L = layers[i];
        for (int e : S.tri_edge[t])
            if (S.edges[e].t1 != -1 && !L.eface[e].empty)
                push(i, detail::other_tri(S.edges[e], t), 1, e);
        for (int w : S.tris[t])
            if (!L.vportal[w].empty)
                for (int t2 : S.vert_tris[w])
                    if (t2 != t) push(i, t2, 2, w);
        if (i + 1 < n && slices[i + 1].vface[t]) push(i + 1, t, 3, i + 1);
        if (i > 0 && slices[i].vface[t]) push(i - 1, t, 4, i);
    }
    if (goal < 0) return std::nullopt;

    std::vector<int> path;
    std::vector<Move> moves;  // moves[k] leads from path[k-1] into path[k]
    for (int v = goal; v != -1; v = par[v].pred) {
        path.push_back(v);
        moves.push_back(par[v].mv);
    }
    std::reverse(path.begin(), path.end());
    std::reverse(moves.begin(), moves.end());

    EmbedWitness W;
    const Rat N = rat(n);
    int t0 = path[0] % T;
    W.steps.push_back({rat(0), closest_point_on_triangle(f.v[0], S.triangle(t0)), t0});
    for (std::size_t k = 1; k < path.size(); ++k) {
        int i_prev = path[k - 1] / T;
        int t_cur = path[k] % T;
        const Move& mv = moves[k];
        switch (mv.kind) {
            case 1: {
                Rat sp = rational_in_interval(layers[i_prev].eface[mv.via]);
                Point fx = f.seg(i_prev).eval(sp);
                W.steps.push_back({(rat(i_prev) + sp) / N,
                                   closest_point_on_segment(fx, S.edge_segment(mv.via)),
                                   t_cur});
                break;
            }
            case 2: {
                Rat sp = rational_in_interval(layers[i_prev].vportal[mv.via]);
                W.steps.push_back({(rat(i_prev) + sp) / N, S.verts[mv.via], t_cur});
                break;
            }
            case 3:
            case 4: {
                int kv = mv.via;
                W.steps.push_back({rat(kv) / N,
                                   closest_point_on_triangle(f.v[kv], S.triangle(t_cur)),
                                   t_cur});
                break;
            }
            default:
                fail("unexpected move in the reachability path");
        }
    }
    int tg = goal % T;
    W.steps.push_back({rat(1), closest_point_on_triangle(f.v[n], S.triangle(tg)), tg});
    return W;
}

// Bisect the smallest eps (within tol) for which the matching exists.
inline std::pair<Rat, Rat> embed_frechet_value(const PolyCurve& f, const TriSurface& S,
                                               bool weak, const Rat& tol,
                                               long long max_cells = -1) {
    require(sgn(tol) > 0, "tolerance must be positive");
    auto decide = [&](const Rat& v) -> bool {
        Tol e = tol_of_value(v);
        return weak ? embed_weak_frechet(f, S, e, nullptr, max_cells).has_value()
                    : embed_frechet(f, S, e, nullptr, max_cells).has_value();
    };
    if (decide(rat(0))) return {rat(0), rat(0)};
    // A matching that parks the image at one surface vertex works once eps
    // reaches the farthest curve vertex; curve-to-point distance peaks at a
    // curve vertex.
    Rat d2max(0);
    for (const auto& p : f.v) d2max = rat_max(d2max, dist2(p, S.verts[0]));
    Rat hi = quad_bracket(quad_sqrt(d2max), tol / 2).second;
    require(decide(hi), "upper bound failed to produce a matching");
    Rat lo(0);
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / 2;
        if (decide(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

// Check a claimed witness matching.  For the two matching modes this verifies
// the stepwise conditions (parameter range, distance bound, point containment,
// consecutive steps sharing a triangle, and — in the strong mode — monotone
// parameters).  For the symmetric mode it verifies that the induced curve is
// simple, lies on the surface, and stays within eps of f in symmetric
// distance.
inline bool embed_witness_valid(const PolyCurve& f, const TriSurface& S, const Tol& eps,
                                const EmbedWitness& W, EmbedMode mode,
                                std::string* why = nullptr) {
    auto reject = [&](const char* m) {
        if (why) *why = m;
        return false;
    };
    if (f.dim() != S.dim) return reject("curve and surface dimensions differ");
    if (W.steps.empty()) return reject("witness has no steps");
    for (const auto& stp : W.steps) {
        if (stp.s < 0 || stp.s > 1) return reject("step parameter outside [0,1]");
        if (stp.tri < 0 || stp.tri >= S.ntris()) return reject("step triangle id out of range");
        if (stp.q.dim != S.dim) return reject("step point has the wrong dimension");
        if (!point_in_triangle(stp.q, S.triangle(stp.tri)))
            return reject("step point is not in its triangle");
    }
    if (mode == EmbedMode::hausdorff) {
        PolyCurve c;
        try {
            c = W.induced_curve();
        } catch (const Error&) {
            return reject("witness image collapses to a point");
        }
        if (!is_simple(c, true).simple) return reject("witness curve is not simple");
        for (int i = 0; i < c.segments(); ++i)
            if (!segment_on_surface(c.seg(i), S))
                return reject("witness curve leaves the surface");
        if (quad_cmp(hausdorff_dist2(f, c), Quad(eps.sq)) > 0)
            return reject("witness curve is farther than eps in symmetric distance");
        return true;
    }
    if (W.steps.front().s != 0) return reject("matching must start at parameter 0");
    if (W.steps.back().s != 1) return reject("matching must end at parameter 1");
    for (std::size_t k = 0; k < W.steps.size(); ++k) {
        const auto& stp = W.steps[k];
        if (dist2(curve_point(f, stp.s), stp.q) > eps.sq)
            return reject("step exceeds the distance bound");
        if (k == 0) continue;
        if (mode == EmbedMode::frechet && stp.s < W.steps[k - 1].s)
            return reject("parameters must not decrease");
        // Consecutive matched points must share a triangle so the connecting
        // chord stays on the surface.
        bool common = false;
        for (int t : locate_all(W.steps[k - 1].q, S)) {
            if (point_in_triangle(stp.q, S.triangle(t))) {
                common = true;
                break;
            }
        }
        if (!common) return reject("consecutive steps do not share a triangle");
        // Between steps the curve parameter moves linearly and both endpoints
        // obey the bound; convexity of the distance along the sweep makes the
        // endpoint checks sufficient, given the previous step also passed.
    }
    return true;
}

// ---------------------------------------------------------------------------
// Planar self-overlap removal
// ---------------------------------------------------------------------------

namespace detail {

struct PointLess {
    bool operator()(const Point& a, const Point& b) const {
        if (a.x != b.x) return a.x < b.x;
        if (a.y != b.y) return a.y < b.y;
        return a.z < b.z;
    }
};

struct EdgeKeyLess {
    PointLess pl;
    bool operator()(const std::pair<Point, Point>& x, const std::pair<Point, Point>& y) const {
        if (pl(x.first, y.first)) return true;
        if (pl(y.first, x.first)) return false;
        return pl(x.second, y.second);
    }
};

inline bool dir_equal(const Point& a, const Point& b) {
    return sgn(cross2(a, b)) == 0 && sgn(dot(a, b)) > 0;
}

// Is direction r strictly inside the sector swept counterclockwise from a to b?
// Directions equal to a boundary ray are not inside.
inline bool in_ccw_sector(const Point& a, const Point& b, const Point& r) {
    if (dir_equal(r, a) || dir_equal(r, b)) return false;
    int c = sgn(cross2(a, b));
    if (c > 0) return sgn(cross2(a, r)) > 0 && sgn(cross2(r, b)) > 0;
    if (c < 0) return sgn(cross2(a, r)) > 0 || sgn(cross2(r, b)) > 0;
    if (sgn(dot(a, b)) > 0) return !dir_equal(r, a);  // a == b: everything else
    return sgn(cross2(a, r)) > 0;                     // opposite rays: left half-plane
}

// Two passes through a common point, with ray pairs (ia,oa) and (ib,ob):
// do they interleave (so that any local drawing must cross)?
inline bool rays_interleave(const Point& ia, const Point& oa, const Point& ib,
                            const Point& ob) {
    if (dir_equal(ia, oa)) return false;  // degenerate slit cannot be crossed strictly
    bool b_in1 = in_ccw_sector(ia, oa, ib);
    bool b_in2 = in_ccw_sector(oa, ia, ib);
    bool o_in1 = in_ccw_sector(ia, oa, ob);
    bool o_in2 = in_ccw_sector(oa, ia, ob);
    return (b_in1 && o_in2) || (b_in2 && o_in1);
}

inline Point l1_normalized(const Point& d) {
    Rat l = rat_abs(d.x) + rat_abs(d.y);
    return Point(d.x / l, d.y / l);
}

// Remove self-overlaps of a planar traversal by re-traversing it with
// non-crossing turn pairings, then offsetting repeated edge passes and
// cutting corners at repeated vertex visits.  svals, when nonempty, carries a
// per-vertex parameter that is interpolated through subdivision and preserved
// through offsets.  All displacements stay below delta_off.
inline std::pair<std::vector<Point>, std::vector<Rat>> untangle_core(
        const std::vector<Point>& pts_in, const std::vector<Rat>& svals_raw,
        const Rat& delta_off) {
    require(pts_in.size() >= 2, "traversal needs at least two points");
    require(sgn(delta_off) > 0, "offset bound must be positive");
    const bool carry = !svals_raw.empty();
    if (carry) require(svals_raw.size() == pts_in.size(), "parameter array length mismatch");
    // drop consecutive duplicates so every edge is a nondegenerate segment
    std::vector<Point> pts;
    std::vector<Rat> svals_in;
    for (std::size_t k = 0; k < pts_in.size(); ++k) {
        if (!pts.empty() && pts_in[k] == pts.back()) continue;
        pts.push_back(pts_in[k]);
        if (carry) svals_in.push_back(svals_raw[k]);
    }
    require(pts.size() >= 2, "traversal collapses to a point");
    const int n = static_cast<int>(pts.size()) - 1;

    // 1) Subdivide every segment at its intersections with every other one, so
    //    that afterwards two sub-edges meet only at shared endpoints.
    std::vector<std::vector<Rat>> cuts(n);
    for (int i = 0; i < n; ++i) cuts[i] = {rat(0), rat(1)};
    auto param_on = [](const Segment& s, const Point& p) -> Rat {
        Point u = vsub(s.b, s.a);
        return dot(vsub(p, s.a), u) / norm2(u);
    };
    for (int i = 0; i < n; ++i) {
        Segment si(pts[i], pts[i + 1]);
        for (int j = i + 1; j < n; ++j) {
            Segment sj(pts[j], pts[j + 1]);
            auto X = segment_pair_intersection(si, sj);
            if (X.rel == SegRel::disjoint) continue;
            if (X.rel == SegRel::overlap) {
                for (const Point& p : {sj.a, sj.b})
                    if (point_segment_dist2(p, si) == 0) cuts[i].push_back(param_on(si, p));
                for (const Point& p : {si.a, si.b})
                    if (point_segment_dist2(p, sj) == 0) cuts[j].push_back(param_on(sj, p));
            } else {
                cuts[i].push_back(param_on(si, *X.point));
                cuts[j].push_back(param_on(sj, *X.point));
            }
        }
    }
    std::vector<Point> walk;
    std::vector<Rat> ws;
    auto push_walk = [&](const Point& p, const Rat& s) {
        if (!walk.empty() && p == walk.back()) return;
        walk.push_back(p);
        ws.push_back(s);
    };
    for (int i = 0; i < n; ++i) {
        auto& cs = cuts[i];
        std::sort(cs.begin(), cs.end());
        Segment s(pts[i], pts[i + 1]);
        for (const Rat& t : cs) {
            if (t < 0 || t >= 1) continue;
            Rat sv = carry ? svals_in[i] + t * (svals_in[i + 1] - svals_in[i]) : rat(0);
            push_walk(s.eval(t), sv);
        }
    }
    push_walk(pts.back(), carry ? svals_in.back() : rat(0));
    int m = static_cast<int>(walk.size()) - 1;
    require(m >= 1, "traversal collapsed during subdivision");

    // 2) Re-traverse: while two passes through a common vertex interleave,
    //    reverse the sub-walk between the two visits.  This keeps the same
    //    edge multiset and fixes the pairing at that vertex.
    long long guard = 0;
    const long long guard_cap = 64 + 4LL * m * m;
    bool changed = true;
    while (changed) {
        changed = false;
        std::map<Point, std::vector<int>, PointLess> at;
        for (int k = 0; k <= m; ++k) at[walk[k]].push_back(k);
        for (auto& [p, occ] : at) {
            if (occ.size() < 2) continue;
            for (std::size_t a = 0; a < occ.size() && !changed; ++a) {
                for (std::size_t b = a + 1; b < occ.size() && !changed; ++b) {
                    int pa = occ[a], pb = occ[b];
                    if (pa == 0 || pb == m) continue;  // endpoint visits have one ray
                    Point ia = vsub(walk[pa - 1], walk[pa]);
                    Point oa = vsub(walk[pa + 1], walk[pa]);
                    Point ib = vsub(walk[pb - 1], walk[pb]);
                    Point ob = vsub(walk[pb + 1], walk[pb]);
                    if (!rays_interleave(ia, oa, ib, ob)) continue;
                    std::reverse(walk.begin() + pa + 1, walk.begin() + pb);
                    std::reverse(ws.begin() + pa + 1, ws.begin() + pb);
                    changed = true;
                    require(++guard < guard_cap, "re-traversal failed to settle");
                }
            }
            if (changed) break;
        }
    }

    // 2b) A walk that lies entirely on one line gets an exact layered drawing:
    //     split it into maximal monotone runs and draw run i at height
    //     (i-1)*step above the line, joined by short jogs at the turning
    //     stations.  Distinct heights keep runs apart, a jog spans only the
    //     heights of its two runs, and jogs at one station belong to
    //     consecutive runs, so the result is always simple.
    {
        Point d0 = vsub(walk[1], walk[0]);
        bool collinear = true;
        for (int k = 2; k <= m && collinear; ++k)
            if (sgn(cross2(d0, vsub(walk[k], walk[0]))) != 0) collinear = false;
        if (collinear) {
            std::vector<Rat> t(m + 1);
            for (int k = 0; k <= m; ++k) t[k] = dot(vsub(walk[k], walk[0]), d0);
            int runs = 1;
            for (int k = 1; k < m; ++k)
                if (sgn(t[k + 1] - t[k]) != sgn(t[k] - t[k - 1])) ++runs;
            Point nh = l1_normalized(Point(-d0.y, d0.x));
            Rat step = delta_off / rat(2 * runs);
            std::vector<Point> out;
            std::vector<Rat> os;
            int run = 0;
            out.push_back(walk[0]);
            os.push_back(ws[0]);
            for (int k = 1; k <= m; ++k) {
                if (k >= 2 && sgn(t[k] - t[k - 1]) != sgn(t[k - 1] - t[k - 2])) {
                    ++run;  // jog up at the turning station
                    out.push_back(vadd(walk[k - 1], vscale(rat(run) * step, nh)));
                    os.push_back(ws[k - 1]);
                }
                out.push_back(vadd(walk[k], vscale(rat(run) * step, nh)));
                os.push_back(ws[k]);
            }
            require(is_simple(make_curve(out), true).simple,
                    "layered drawing of a straight-line traversal is not simple");
            return {std::move(out), std::move(os)};
        }
    }

    // 3) Census: visit and pass multiplicities, displacement directions.
    std::map<Point, std::vector<Point>, PointLess> rays;
    for (int k = 0; k <= m; ++k) {
        if (k > 0) rays[walk[k]].push_back(vsub(walk[k - 1], walk[k]));
        if (k < m) rays[walk[k]].push_back(vsub(walk[k + 1], walk[k]));
    }
    std::vector<int> vnum(m + 1, 0);
    std::vector<Point> vdir(m + 1, Point(rat(0), rat(0)));
    int maxvisit = 1;
    {
        std::map<Point, int, PointLess> vv;
        for (int k = 0; k <= m; ++k) {
            vnum[k] = ++vv[walk[k]];
            maxvisit = std::max(maxvisit, vnum[k]);
        }
    }
    // Lane assignment for repeated passes of one segment: every pass after the
    // first is drawn at an offset lane beside the line, with one lane counter
    // per side; the first pass stays on the line, keeping the image coverage
    // exact.  The side comes from the pass's own context: an adjacent walk
    // piece leaving the line pins the lane to its side; where the strand
    // instead continues along the line through a shared station, the lane
    // avoids any side occupied by another ray at that station.
    std::vector<int> pnum(m, 0);
    std::vector<Point> poff(m, Point(rat(0), rat(0)));
    int maxpass = 1;
    {
        std::map<std::pair<Point, Point>, std::array<int, 3>, EdgeKeyLess> ep;  // total, +side, -side
        PointLess pl;
        for (int k = 0; k < m; ++k) {
            auto key = pl(walk[k], walk[k + 1]) ? std::make_pair(walk[k], walk[k + 1])
                                                : std::make_pair(walk[k + 1], walk[k]);
            auto& cnt = ep[key];
            if (++cnt[0] == 1) {
                pnum[k] = 1;
                continue;
            }
            Point cd = vsub(key.second, key.first);
            int must = 0;
            bool blocked_pos = false, blocked_neg = false;
            auto consider_end = [&](const Point& at, const Point* adj) {
                if (!adj) return;  // walk terminus: no constraint
                int s = sgn(cross2(cd, *adj));
                if (s != 0) {
                    if (must == 0) must = s;
                    return;
                }
                for (const Point& r : rays[at]) {
                    int c = sgn(cross2(cd, r));
                    if (c > 0) blocked_pos = true;
                    if (c < 0) blocked_neg = true;
                }
            };
            Point adj_u, adj_w;
            if (k > 0) adj_u = vsub(walk[k - 1], walk[k]);
            if (k + 2 <= m) adj_w = vsub(walk[k + 2], walk[k + 1]);
            consider_end(walk[k], k > 0 ? &adj_u : nullptr);
            consider_end(walk[k + 1], k + 2 <= m ? &adj_w : nullptr);
            int side = must != 0           ? must
                       : blocked_pos && !blocked_neg ? -1
                       : blocked_neg && !blocked_pos ? 1
                                                     : 1;
            int lane = ++cnt[side > 0 ? 1 : 2];
            pnum[k] = lane + 1;
            maxpass = std::max(maxpass, pnum[k]);
            poff[k] = vscale(rat(side), l1_normalized(Point(-cd.y, cd.x)));
        }
    }
    // Joint displacement for repeated vertex visits.  Each candidate direction
    // targets an open sector free of other strands; it is accepted only if the
    // displacement combined with the adjacent lane offsets still lands
    // strictly inside that sector, scaling the vertex term up until it
    // dominates the lane term.
    auto sector_mid = [](const Point& a, const Point& b) -> Point {
        if (dir_equal(a, b)) return vscale(rat(-1), l1_normalized(a));
        int c = sgn(cross2(a, b));
        if (c == 0) return l1_normalized(Point(-a.y, a.x));  // opposite: left half
        Point s = vadd(l1_normalized(a), l1_normalized(b));
        return c > 0 ? s : Point(-s.x, -s.y);
    };
    for (int k = 0; k <= m; ++k) {
        if (vnum[k] == 1) continue;
        Point eo_in = k > 0 ? vscale(rat(pnum[k - 1] - 1), poff[k - 1]) : Point(rat(0), rat(0));
        Point eo_out = k < m ? vscale(rat(pnum[k] - 1), poff[k]) : Point(rat(0), rat(0));
        struct Cand {
            Point dir, a, b;  // direction plus the open sector (a ccw to b) it targets
        };
        std::vector<Cand> cands;
        auto neighbors = [&](const Point& r0) -> std::optional<std::pair<Point, Point>> {
            std::optional<Point> ccw, cw;
            for (const Point& r : rays[walk[k]]) {
                if (dir_equal(r, r0)) continue;
                if (!ccw || in_ccw_sector(r0, *ccw, r)) ccw = r;
                if (!cw || in_ccw_sector(*cw, r0, r)) cw = r;
            }
            if (!ccw) return std::nullopt;
            return std::make_pair(*cw, *ccw);  // (cw neighbor, ccw neighbor)
        };
        if (k == 0 || k == m) {
            // repeated endpoint: settle into a wedge beside the curve's own
            // edge, on the side its lane already uses when it has one
            Point r0 = k == 0 ? vsub(walk[1], walk[0]) : vsub(walk[m - 1], walk[m]);
            const Point& eo = k == 0 ? eo_out : eo_in;
            auto nb = neighbors(r0);
            if (!nb) {
                vdir[k] = l1_normalized(r0);
                continue;
            }
            Cand cwside{sector_mid(nb->first, r0), nb->first, r0};
            Cand ccwside{sector_mid(r0, nb->second), r0, nb->second};
            if (sgn(cross2(r0, eo)) < 0)
                cands = {cwside, ccwside};
            else
                cands = {ccwside, cwside};
        } else {
            Point rin = vsub(walk[k - 1], walk[k]);
            Point rout = vsub(walk[k + 1], walk[k]);
            if (dir_equal(rin, rout)) {
                // U-turn tip: retract into the slit, or sidestep beside it
                // when other strands share the tip
                auto nb = neighbors(rin);
                if (!nb) {
                    vdir[k] = l1_normalized(rin);
                    continue;
                }
                Cand slit{l1_normalized(rin), nb->first, nb->second};
                Cand cwside{sector_mid(nb->first, rin), nb->first, rin};
                Cand ccwside{sector_mid(rin, nb->second), rin, nb->second};
                if (sgn(cross2(rin, eo_in)) < 0)
                    cands = {slit, cwside, ccwside};
                else
                    cands = {slit, ccwside, cwside};
            } else {
                bool fwd_free = true, bwd_free = true;
                for (const Point& r : rays[walk[k]]) {
                    if (in_ccw_sector(rin, rout, r)) fwd_free = false;
                    if (in_ccw_sector(rout, rin, r)) bwd_free = false;
                }
                Cand fwd{sector_mid(rin, rout), rin, rout};
                Cand bwd{sector_mid(rout, rin), rout, rin};
                if (fwd_free) cands.push_back(fwd);
                if (bwd_free) cands.push_back(bwd);
                if (cands.empty()) cands = {fwd, bwd};
            }
        }
        bool done = false;
        for (long scale : {4L, 16L, 64L, 256L}) {
            for (const Cand& c : cands) {
                Point d1 = vadd(vscale(rat(scale), c.dir), eo_in);
                Point d2 = vadd(vscale(rat(scale), c.dir), eo_out);
                bool ok1 = k == 0 || in_ccw_sector(c.a, c.b, d1);
                bool ok2 = k == m || in_ccw_sector(c.a, c.b, d2);
                if (ok1 && ok2) {
                    vdir[k] = vscale(rat(scale), c.dir);
                    done = true;
                    break;
                }
            }
            if (done) break;
        }
        if (!done) vdir[k] = vscale(rat(4), cands.front().dir);
    }

    // 4) Emit with offsets small enough that every displacement stays below
    //    delta_off/2; shrink further until the result is simple.
    Rat fmax = rat(1);
    for (int k = 0; k <= m; ++k) {
        Rat f = rat(vnum[k] - 1) * (abs(vdir[k].x) + abs(vdir[k].y));
        if (f > fmax) fmax = f;
    }
    (void)maxvisit;
    Rat step = delta_off / (rat(2) * (fmax + rat(maxpass + 1)));
    for (int attempt = 0; attempt < 10; ++attempt, step = step / 4) {
        std::vector<Point> out;
        std::vector<Rat> os;
        auto push = [&](const Point& p, const Rat& s) {
            if (!out.empty() && p == out.back()) return;
            out.push_back(p);
            os.push_back(s);
        };
        for (int k = 0; k < m; ++k) {
            Point eo = vscale(rat(pnum[k] - 1) * step, poff[k]);
            Point da = vscale(rat(vnum[k] - 1) * step, vdir[k]);
            Point db = vscale(rat(vnum[k + 1] - 1) * step, vdir[k + 1]);
            push(vadd(vadd(walk[k], eo), da), ws[k]);
            push(vadd(vadd(walk[k + 1], eo), db), ws[k + 1]);
        }
        if (out.size() < 2) continue;
        PolyCurve oc = make_curve(out);
#ifdef CURVEMBED_UNTANGLE_TRACE
        if (attempt == 0) {
            auto dump = [](const char* tag, const std::vector<Point>& v) {
                std::fprintf(stderr, "%s:", tag);
                for (const auto& p : v)
                    std::fprintf(stderr, " (%s,%s)", p.x.get_str().c_str(), p.y.get_str().c_str());
                std::fprintf(stderr, "\n");
            };
            dump("walk", walk);
            std::fprintf(stderr, "vnum:");
            for (int k = 0; k <= m; ++k) std::fprintf(stderr, " %d", vnum[k]);
            std::fprintf(stderr, "\nvdir:");
            for (int k = 0; k <= m; ++k)
                std::fprintf(stderr, " (%s,%s)", vdir[k].x.get_str().c_str(),
                             vdir[k].y.get_str().c_str());
            std::fprintf(stderr, "\npnum:");
            for (int k = 0; k < m; ++k) std::fprintf(stderr, " %d", pnum[k]);
            std::fprintf(stderr, "\n");
            dump("out", out);
            auto rep = is_simple(oc, false);
            for (const auto& cr : rep.crossings)
                std::fprintf(stderr, "cross: seg %d x seg %d at (%s,%s)\n", cr.i, cr.j,
                             cr.witness.x.get_str().c_str(), cr.witness.y.get_str().c_str());
        }
#endif
        if (is_simple(oc, true).simple) return {std::move(out), std::move(os)};
    }
    fail("overlap removal could not separate the traversal within the offset bound");
}

}  // namespace detail

// Rework a planar curve into a simple one with the same image up to a
// delta_off-offset re-traversal: the output is simple and within delta_off of
// the input in symmetric distance.
inline PolyCurve untangle(const PolyCurve& c, const Rat& delta_off) {
    require(c.dim() == 2, "overlap removal works on planar curves");
    if (is_simple(c, true).simple) return c;
    auto [pts, sv] = detail::untangle_core(c.v, {}, delta_off);
    (void)sv;
    return make_curve(std::move(pts));
}

// ---------------------------------------------------------------------------
// Symmetric-distance embedding
// ---------------------------------------------------------------------------

namespace detail {

struct Dsu {
    std::vector<int> p;
    explicit Dsu(int n) : p(n) {
        for (int i = 0; i < n; ++i) p[i] = i;
    }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    void join(int a, int b) { p[find(a)] = find(b); }
};

// A positive rational lower bound on a positive algebraic value, within a
// 2^-16 relative factor.
inline Rat rat_lower_bound_tight(const Quad& x) {
    require(quad_sign(x) > 0, "value must be positive");
    Rat w(1);
    for (int k = 0; k < 4096; ++k) {
        Rat l = quad_bracket(x, w).first;
        if (sgn(l) > 0) return quad_bracket(x, l / 65536).first;
        w = w / 4;
    }
    fail("failed to bound the value away from zero");
}

}  // namespace detail

// Find a simple curve on S within eps of f in symmetric distance.  The search
// restricts itself to curves that stay near f's image: it covers f by free
// cells of one connected piece of the approximation complex, walks that piece,
// and removes the self-overlaps of the walk.  delta_off bounds the overlap-
// removal offsets (and is taken out of the distance budget).
inline std::optional<EmbedWitness> embed_hausdorff_simple(
        const PolyCurve& f, const TriSurface& S, const Tol& eps,
        std::optional<Rat> delta_off_opt = std::nullopt, Stats* stats = nullptr,
        long long max_cells = -1) {
    require(f.dim() == S.dim, "curve and surface dimensions differ");
    require(S.dim == 2, "the symmetric-distance search works on planar surfaces");
    if (max_cells < 0) max_cells = default_max_cells();
    const int n = f.segments();
    const int T = S.ntris();
    require(static_cast<long long>(n) * T <= max_cells,
            "free-space complex exceeds the cell cap");
    Stats local;
    Stats& st = stats ? *stats : local;
    const Rat N = rat(n);

    // f itself may already be the answer.
    {
        bool on = true;
        for (int i = 0; i < n && on; ++i) on = segment_on_surface(f.seg(i), S);
        if (on && is_simple(f, true).simple) {
            EmbedWitness W;
            for (int k = 0; k <= n; ++k) {
                int t = locate(f.v[k], S);
                require(t != LOCATE_OUTSIDE, "surface containment is inconsistent");
                W.steps.push_back({rat(k) / N, f.v[k], t});
            }
            return W;
        }
    }
    require(sgn(eps.sq) > 0, "a zero tolerance requires the curve itself to be simple and on the surface");

    // Distance budget: search at a rational tolerance v_search, leaving
    // delta_off of headroom for the overlap-removal offsets.
    Rat l = detail::rat_lower_bound_tight(quad_sqrt(eps.sq));
    Rat delta_off = delta_off_opt ? *delta_off_opt : l / 65536;
    require(sgn(delta_off) > 0, "offset bound must be positive");
    require(delta_off < l, "offset bound leaves no distance budget for the search");
    Rat v_search = l - delta_off / 2;
    Tol eps_s = tol_of_value(v_search);

    std::vector<LayerFaces> layers;
    layers.reserve(n);
    for (int i = 0; i < n; ++i) layers.push_back(build_layer(f, i, S, eps_s, st));
    std::vector<SliceData> slices;
    slices.reserve(n + 1);
    for (int i = 0; i <= n; ++i) slices.push_back(build_slice(f, i, S, eps_s, st));

    // Connected pieces of the free complex.
    auto cid = [&](int i, int t) { return i * T + t; };
    detail::Dsu dsu(n * T);
    for (int i = 0; i < n; ++i) {
        const LayerFaces& L = layers[i];
        for (std::size_t e = 0; e < S.edges.size(); ++e)
            if (S.edges[e].t1 != -1 && !L.eface[e].empty)
                dsu.join(cid(i, S.edges[e].t0), cid(i, S.edges[e].t1));
        for (int w = 0; w < static_cast<int>(S.verts.size()); ++w)
            if (!L.vportal[w].empty && S.vert_tris[w].size() >= 2)
                for (std::size_t j = 1; j < S.vert_tris[w].size(); ++j)
                    dsu.join(cid(i, S.vert_tris[w][0]), cid(i, S.vert_tris[w][j]));
        if (i > 0)
            for (int t = 0; t < T; ++t)
                if (slices[i].vface[t]) dsu.join(cid(i - 1, t), cid(i, t));
    }

    // Per-cell parameter spans (computed lazily).
    std::vector<Interval1> span(static_cast<std::size_t>(n) * T);
    std::vector<char> span_done(static_cast<std::size_t>(n) * T, 0);
    auto cell_span = [&](int i, int t) -> const Interval1& {
        int id = cid(i, t);
        if (!span_done[id]) {
            span_done[id] = 1;
            if (layers[i].cell_free[t])
                span[id] = cell_s_interval(f.seg(i), S.triangle(t), eps_s);
        }
        return span[id];
    };

    // Which components cover all of f?  For each candidate, choose per layer a
    // chain of cells whose spans cover [0,1], with rational handover points.
    std::vector<int> roots;
    {
        std::vector<char> seen(n * T, 0);
        for (int t = 0; t < T; ++t) {
            if (!layers[0].cell_free[t]) continue;
            int r = dsu.find(cid(0, t));
            if (!seen[r]) {
                seen[r] = 1;
                roots.push_back(r);
            }
        }
    }
    struct Piece {
        int i, t;
        Rat a, b;  // rational sub-span this cell is responsible for
    };

    std::optional<Error> last_err;
    for (int root : roots) {
        // Exact coverage test per layer, then rational handovers.
        std::vector<Piece> pieces;
        bool covers = true;
        for (int i = 0; i < n && covers; ++i) {
            std::vector<int> cells;
            for (int t = 0; t < T; ++t)
                if (layers[i].cell_free[t] && dsu.find(cid(i, t)) == root &&
                    !cell_span(i, t).empty)
                    cells.push_back(t);
            std::sort(cells.begin(), cells.end(), [&](int a, int b) {
                return quad_cmp(cell_span(i, a).lo, cell_span(i, b).lo) < 0;
            });
            // Greedy chain: repeatedly take the cell reaching farthest among
            // those whose span starts at or before the current frontier.
            Quad cur(rat(0));
            std::vector<int> chain;
            std::size_t k = 0;
            bool first = true;
            while (first || quad_cmp(cur, Quad(rat(1))) < 0) {
                int best = -1;
                while (k < cells.size() &&
                       quad_cmp(cell_span(i, cells[k]).lo, cur) <= 0) {
                    if (best < 0 || quad_cmp(cell_span(i, cells[k]).hi,
                                             cell_span(i, best).hi) > 0)
                        best = cells[k];
                    ++k;
                }
                if (best < 0 || (!first && quad_cmp(cell_span(i, best).hi, cur) <= 0)) {
                    covers = false;
                    break;
                }
                chain.push_back(best);
                cur = cell_span(i, best).hi;
                first = false;
            }
            if (!covers) break;
            // Rational handover points between consecutive chain cells.
            try {
                std::vector<Rat> hand;
                hand.push_back(rat(0));
                for (std::size_t j = 0; j + 1 < chain.size(); ++j) {
                    Interval1 ov;
                    ov.empty = false;
                    ov.lo = cell_span(i, chain[j + 1]).lo;
                    ov.hi = cell_span(i, chain[j]).hi;
                    // the handover must also not precede the previous one
                    if (quad_cmp(Quad(hand.back()), ov.lo) > 0) ov.lo = Quad(hand.back());
                    require(quad_cmp(ov.lo, ov.hi) <= 0, "handover window is empty");
                    hand.push_back(rational_in_interval(ov));
                }
                hand.push_back(rat(1));
                for (std::size_t j = 0; j < chain.size(); ++j)
                    pieces.push_back({i, chain[j], hand[j], hand[j + 1]});
            } catch (const Error& e) {
                last_err = e;
                covers = false;
            }
        }
        if (!covers) continue;

        // Walk the pieces in curve order.  Consecutive pieces are joined by
        // the path between their cells in a spanning tree of the component;
        // each tree edge has one fixed crossing point, so repeated use of a
        // connector retraces the same points and the overlap removal sees
        // clean doubled edges instead of near-duplicates.
        std::vector<Point> wpts;
        std::vector<Rat> wsv;
        auto emit = [&](const Point& p, const Rat& s) {
            if (!wpts.empty() && p == wpts.back()) return;
            wpts.push_back(p);
            wsv.push_back(s);
        };
        bool walk_ok = true;
        try {
            struct Link {
                int parent = -1;  // tree parent cell, -1 at the root
                int depth = 0;
                Point y;  // fixed crossing point into the parent
                Rat ys;
            };
            std::map<int, Link> link;
            int start = cid(pieces[0].i, pieces[0].t);
            link[start] = Link{};
            std::deque<int> bfs{start};
            while (!bfs.empty()) {
                int cur = bfs.front();
                bfs.pop_front();
                int i = cur / T, t = cur % T;
                int d = link[cur].depth;
                auto tryv = [&](int i2, int t2, const Point& y, const Rat& ys) {
                    int v = cid(i2, t2);
                    if (link.count(v)) return;
                    link[v] = Link{cur, d + 1, y, ys};
                    bfs.push_back(v);
                };
                const LayerFaces& L = layers[i];
                for (int e : S.tri_edge[t])
                    if (S.edges[e].t1 != -1 && !L.eface[e].empty) {
                        Rat sp = rational_in_interval(L.eface[e]);
                        Point y = closest_point_on_segment(f.seg(i).eval(sp),
                                                           S.edge_segment(e));
                        tryv(i, detail::other_tri(S.edges[e], t), y, (rat(i) + sp) / N);
                    }
                for (int w : S.tris[t])
                    if (!L.vportal[w].empty) {
                        Rat sp = rational_in_interval(L.vportal[w]);
                        for (int t2 : S.vert_tris[w])
                            if (t2 != t) tryv(i, t2, S.verts[w], (rat(i) + sp) / N);
                    }
                if (i + 1 < n && slices[i + 1].vface[t])
                    tryv(i + 1, t, closest_point_on_triangle(f.v[i + 1], S.triangle(t)),
                         rat(i + 1) / N);
                if (i > 0 && slices[i].vface[t])
                    tryv(i - 1, t, closest_point_on_triangle(f.v[i], S.triangle(t)),
                         rat(i) / N);
            }
            for (const auto& pc : pieces)
                require(link.count(cid(pc.i, pc.t)),
                        "covering cells are disconnected from the walk root");

            int cur = start;
            for (const Piece& pc : pieces) {
                int target = cid(pc.i, pc.t);
                // climb both cells to their meeting point, collecting the
                // connector points passed on the way
                std::vector<std::pair<Point, Rat>> down;
                int a = cur, b = target;
                while (a != b) {
                    if (link[a].depth >= link[b].depth) {
                        emit(link[a].y, link[a].ys);
                        a = link[a].parent;
                    } else {
                        down.push_back({link[b].y, link[b].ys});
                        b = link[b].parent;
                    }
                }
                for (auto it = down.rbegin(); it != down.rend(); ++it)
                    emit(it->first, it->second);
                Point qa = closest_point_on_triangle(f.seg(pc.i).eval(pc.a),
                                                     S.triangle(pc.t));
                Point qb = closest_point_on_triangle(f.seg(pc.i).eval(pc.b),
                                                     S.triangle(pc.t));
                emit(qa, (rat(pc.i) + pc.a) / N);
                emit(qb, (rat(pc.i) + pc.b) / N);
                cur = target;
            }
        } catch (const Error& e) {
            last_err = e;
            walk_ok = false;
        }
        if (!walk_ok || wpts.size() < 2) continue;

        // Remove self-overlaps, keeping the displacement within delta_off/2,
        // then check the result still lies on the surface.
        try {
            auto [opts, osv] = detail::untangle_core(wpts, wsv, delta_off / 2);
            PolyCurve out = make_curve(opts);
            bool on = true;
            for (int i = 0; i < out.segments() && on; ++i)
                on = segment_on_surface(out.seg(i), S);
            if (!on) {
                last_err = Error("untangled walk leaves the surface");
                continue;
            }
            if (quad_cmp(hausdorff_dist2(f, out), Quad(eps.sq)) > 0) {
                last_err = Error("walk exceeded the distance budget");
                continue;
            }
            EmbedWitness W;
            for (std::size_t k = 0; k < opts.size(); ++k) {
                int t = locate(opts[k], S);
                if (t == LOCATE_OUTSIDE) {
                    t = 0;  // unreachable given the containment check above
                }
                W.steps.push_back({osv[k], opts[k], t});
            }
            return W;
        } catch (const Error& e) {
            last_err = e;
            continue;
        }
    }
    if (last_err) throw *last_err;
    return std::nullopt;
}

}  // namespace curvembed
