#pragma once
#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "quad.hpp"

namespace curvembed {

// Points carry x,y,z with z fixed to 0 in dimension 2, so all vector algebra
// is uniformly 3D and exact.
struct Point {
    Rat x, y, z;
    int dim;

    Point() : x(0), y(0), z(0), dim(2) {}
    Point(Rat x_, Rat y_) : x(std::move(x_)), y(std::move(y_)), z(0), dim(2) {}
    Point(Rat x_, Rat y_, Rat z_) : x(std::move(x_)), y(std::move(y_)), z(std::move(z_)), dim(3) {}
};

inline bool operator==(const Point& p, const Point& q) {
    return p.dim == q.dim && p.x == q.x && p.y == q.y && p.z == q.z;
}
inline bool operator!=(const Point& p, const Point& q) { return !(p == q); }

inline Point pt(long x, long y) { return Point(rat(x), rat(y)); }
inline Point pt3(long x, long y, long z) { return Point(rat(x), rat(y), rat(z)); }
inline Point pt(const Rat& x, const Rat& y) { return Point(x, y); }
inline Point pt3(const Rat& x, const Rat& y, const Rat& z) { return Point(x, y, z); }

inline void check_same_dim(const Point& p, const Point& q) {
    require(p.dim == q.dim, "dimension mismatch");
}

// Vector helpers; results inherit the operands' dimension tag.
inline Point vsub(const Point& p, const Point& q) {
    check_same_dim(p, q);
    Point r(p.x - q.x, p.y - q.y, p.z - q.z);
    r.dim = p.dim;
    return r;
}
inline Point vadd(const Point& p, const Point& q) {
    check_same_dim(p, q);
    Point r(p.x + q.x, p.y + q.y, p.z + q.z);
    r.dim = p.dim;
    return r;
}
inline Point vscale(const Rat& c, const Point& p) {
    Point r(c * p.x, c * p.y, c * p.z);
    r.dim = p.dim;
    return r;
}
// p + t*(q - p)
inline Point lerp(const Point& p, const Point& q, const Rat& t) {
    return vadd(p, vscale(t, vsub(q, p)));
}
inline Rat dot(const Point& p, const Point& q) { return p.x * q.x + p.y * q.y + p.z * q.z; }
inline Point cross(const Point& p, const Point& q) {
    Point r(p.y * q.z - p.z * q.y, p.z * q.x - p.x * q.z, p.x * q.y - p.y * q.x);
    r.dim = 3;
    return r;
}
inline Rat norm2(const Point& p) { return dot(p, p); }
inline Rat dist2(const Point& p, const Point& q) { return norm2(vsub(p, q)); }
inline Rat cross2(const Point& a, const Point& b) { return a.x * b.y - a.y * b.x; }

// Sign of the signed area of (a,b,c) in the xy-plane.
inline int orient2d(const Point& a, const Point& b, const Point& c) {
    return sgn(Rat((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)));
}

struct Segment {
    Point a, b;
    Segment() = default;
    Segment(Point a_, Point b_) : a(std::move(a_)), b(std::move(b_)) {
        check_same_dim(a, b);
    }
    bool degenerate() const { return a == b; }
    Point eval(const Rat& t) const { return lerp(a, b, t); }
};

struct PolyCurve {
    std::vector<Point> v;

    int dim() const { return v.empty() ? 2 : v.front().dim; }
    int segments() const { return static_cast<int>(v.size()) - 1; }
    Segment seg(int i) const { return Segment(v[i], v[i + 1]); }
    bool closed() const { return v.size() >= 2 && v.front() == v.back(); }
};

inline PolyCurve make_curve(std::vector<Point> pts) {
    require(pts.size() >= 2, "curve needs at least 2 vertices");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        require(pts[i].dim == pts[0].dim, "curve mixes dimensions");
        if (i) require(pts[i] != pts[i - 1], "curve has repeated consecutive vertex");
    }
    return PolyCurve{std::move(pts)};
}

// Evaluate a curve at a global parameter s in [0,1]: the parameter is uniform
// across segments (segment i covers [i/n, (i+1)/n]).
inline Point curve_point(const PolyCurve& c, const Rat& s) {
    require(s >= 0 && s <= 1, "curve parameter outside [0,1]");
    int n = c.segments();
    Rat t = s * n;
    Int fl = t.get_num() / t.get_den();  // floor: t >= 0
    long i = fl.get_si();
    if (i >= n) i = n - 1;  // s == 1
    Rat local = t - rat(i);
    return c.seg(static_cast<int>(i)).eval(local);
}

// -------- closest points and squared distances (all exact) --------

inline Point closest_point_on_segment(const Point& p, const Segment& s) {
    check_same_dim(p, s.a);
    Point d = vsub(s.b, s.a);
    Rat dd = norm2(d);
    if (sgn(dd) == 0) return s.a;
    Rat t = dot(vsub(p, s.a), d) / dd;
    if (sgn(t) < 0) t = 0;
    if (t > 1) t = 1;
    return s.eval(t);
}

inline Rat point_segment_dist2(const Point& p, const Segment& s) {
    return dist2(p, closest_point_on_segment(p, s));
}

inline bool point_on_segment(const Point& p, const Segment& s) {
    return sgn(point_segment_dist2(p, s)) == 0;
}

struct Triangle {
    Point a, b, c;
};

namespace detail {

// Barycentric coefficients (alpha along b-a, beta along c-a) of the
// projection of p onto the triangle's plane.  Requires nondegenerate abc.
struct Bary {
    Rat alpha, beta;
};

inline Bary bary_of(const Point& p, const Triangle& t) {
    Point u = vsub(t.b, t.a), v = vsub(t.c, t.a), w = vsub(p, t.a);
    Rat d00 = dot(u, u), d01 = dot(u, v), d11 = dot(v, v);
    Rat d20 = dot(w, u), d21 = dot(w, v);
    Rat den = d00 * d11 - d01 * d01;
    require(sgn(den) > 0, "degenerate triangle");
    return {(d11 * d20 - d01 * d21) / den, (d00 * d21 - d01 * d20) / den};
}

}  // namespace detail

inline bool triangle_degenerate(const Triangle& t) {
    Point n = cross(vsub(t.b, t.a), vsub(t.c, t.a));
    return sgn(norm2(n)) == 0;
}

// p in the closed triangle (coplanarity required in 3D).
inline bool point_in_triangle(const Point& p, const Triangle& t) {
    Point u = vsub(t.b, t.a), v = vsub(t.c, t.a), w = vsub(p, t.a);
    Point n = cross(u, v);
    if (sgn(dot(n, w)) != 0) return false;
    auto bc = detail::bary_of(p, t);
    return sgn(bc.alpha) >= 0 && sgn(bc.beta) >= 0 && bc.alpha + bc.beta <= 1;
}

inline Point closest_point_on_triangle(const Point& p, const Triangle& t) {
    auto bc = detail::bary_of(p, t);
    if (sgn(bc.alpha) >= 0 && sgn(bc.beta) >= 0 && bc.alpha + bc.beta <= 1) {
        return vadd(t.a, vadd(vscale(bc.alpha, vsub(t.b, t.a)), vscale(bc.beta, vsub(t.c, t.a))));
    }
    Point best = closest_point_on_segment(p, Segment(t.a, t.b));
    Rat bd = dist2(p, best);
    for (Segment e : {Segment(t.b, t.c), Segment(t.c, t.a)}) {
        Point q = closest_point_on_segment(p, e);
        Rat d = dist2(p, q);
        if (d < bd) {
            bd = d;
            best = q;
        }
    }
    return best;
}

inline Rat point_triangle_dist2(const Point& p, const Triangle& t) {
    return dist2(p, closest_point_on_triangle(p, t));
}

inline std::pair<Point, Point> closest_pair_segments(const Segment& s1, const Segment& s2) {
    check_same_dim(s1.a, s2.a);
    Point u = vsub(s1.b, s1.a), w = vsub(s2.b, s2.a), d = vsub(s1.a, s2.a);
    Rat A = dot(u, u), B = dot(u, w), C = dot(w, w), D = dot(u, d), E = dot(w, d);
    Rat den = A * C - B * B;
    std::optional<std::pair<Point, Point>> best;
    Rat bd;
    auto consider = [&](const Point& x, const Point& y) {
        Rat dd = dist2(x, y);
        if (!best || dd < bd) {
            best = {x, y};
            bd = dd;
        }
    };
    if (sgn(den) > 0) {
        Rat t = (B * E - C * D) / den;
        Rat s = (A * E - B * D) / den;
        if (sgn(t) >= 0 && t <= 1 && sgn(s) >= 0 && s <= 1)
            consider(s1.eval(t), s2.eval(s));
    }
    consider(s1.a, closest_point_on_segment(s1.a, s2));
    consider(s1.b, closest_point_on_segment(s1.b, s2));
    consider(closest_point_on_segment(s2.a, s1), s2.a);
    consider(closest_point_on_segment(s2.b, s1), s2.b);
    return *best;
}

inline Rat segment_segment_dist2(const Segment& s1, const Segment& s2) {
    auto [x, y] = closest_pair_segments(s1, s2);
    return dist2(x, y);
}

// -------- segment pair classification --------

enum class SegRel { disjoint, proper, touching, overlap };

struct SegIntersection {
    SegRel rel = SegRel::disjoint;
    std::optional<Point> point;  // set for proper and touching
};

namespace detail {

// 1D overlap of two collinear segments measured along direction u from origin o.
inline SegIntersection collinear_overlap(const Point& o, const Point& u, const Segment& s1,
                                         const Segment& s2) {
    Rat uu = norm2(u);
    // explicit return type: a deduced one would be a gmp expression template
    // referencing dead temporaries
    auto param = [&](const Point& p) -> Rat { return dot(vsub(p, o), u) / uu; };
    Rat a1 = param(s1.a), b1 = param(s1.b), a2 = param(s2.a), b2 = param(s2.b);
    if (a1 > b1) std::swap(a1, b1);
    if (a2 > b2) std::swap(a2, b2);
    Rat lo = rat_max(a1, a2), hi = rat_min(b1, b2);
    SegIntersection out;
    if (lo > hi) return out;  // disjoint
    if (lo == hi) {
        out.rel = SegRel::touching;
        out.point = vadd(o, vscale(lo, u));
        return out;
    }
    out.rel = SegRel::overlap;
    out.point = vadd(o, vscale((lo + hi) / 2, u));
    return out;
}

}  // namespace detail

// Exact classification; in 3D "crossing" means distance zero.
inline SegIntersection segment_pair_intersection(const Segment& s1, const Segment& s2) {
    check_same_dim(s1.a, s2.a);
    SegIntersection out;
    // degenerate cases reduce to point-on-segment tests
    if (s1.degenerate() || s2.degenerate()) {
        if (s1.degenerate() && s2.degenerate()) {
            if (s1.a == s2.a) {
                out.rel = SegRel::touching;
                out.point = s1.a;
            }
            return out;
        }
        const Point& p = s1.degenerate() ? s1.a : s2.a;
        const Segment& s = s1.degenerate() ? s2 : s1;
        if (point_on_segment(p, s)) {
            out.rel = SegRel::touching;
            out.point = p;
        }
        return out;
    }
    Point u = vsub(s1.b, s1.a), w = vsub(s2.b, s2.a), d = vsub(s2.a, s1.a);
    Point n = cross(u, w);
    if (sgn(norm2(n)) == 0) {
        // parallel; collinear iff offset d is parallel to u as well
        if (sgn(norm2(cross(d, u))) != 0) return out;
        return detail::collinear_overlap(s1.a, u, s1, s2);
    }
    // lines meet (or are skew in 3D): coplanarity requires d . n == 0
    if (sgn(dot(d, n)) != 0) return out;
    Rat nn = norm2(n);
    Rat t = dot(cross(d, w), n) / nn;  // parameter on s1
    Rat s = dot(cross(d, u), n) / nn;  // parameter on s2
    if (sgn(t) < 0 || t > 1 || sgn(s) < 0 || s > 1) return out;
    out.point = s1.eval(t);
    bool interior1 = sgn(t) > 0 && t < 1;
    bool interior2 = sgn(s) > 0 && s < 1;
    out.rel = (interior1 && interior2) ? SegRel::proper : SegRel::touching;
    return out;
}

// -------- segment / triangle --------

inline bool segment_triangle_intersect(const Segment& s, const Triangle& t) {
    Point n = cross(vsub(t.b, t.a), vsub(t.c, t.a));
    Rat d0 = dot(n, vsub(s.a, t.a)), d1 = dot(n, vsub(s.b, t.a));
    int s0 = sgn(d0), s1 = sgn(d1);
    if (s0 == 0 && s1 == 0) {
        // coplanar
        if (point_in_triangle(s.a, t) || point_in_triangle(s.b, t)) return true;
        for (Segment e : {Segment(t.a, t.b), Segment(t.b, t.c), Segment(t.c, t.a)})
            if (segment_pair_intersection(s, e).rel != SegRel::disjoint) return true;
        return false;
    }
    if (s0 * s1 > 0) return false;
    if (s0 == s1) return false;  // unreachable; keeps the logic explicit
    Rat tt = d0 / (d0 - d1);
    return point_in_triangle(s.eval(tt), t);
}

inline Rat segment_triangle_dist2(const Segment& s, const Triangle& t) {
    if (segment_triangle_intersect(s, t)) return Rat(0);
    Rat best = point_triangle_dist2(s.a, t);
    Rat d = point_triangle_dist2(s.b, t);
    if (d < best) best = d;
    for (Segment e : {Segment(t.a, t.b), Segment(t.b, t.c), Segment(t.c, t.a)}) {
        d = segment_segment_dist2(s, e);
        if (d < best) best = d;
    }
    return best;
}

// -------- simplicity --------

struct Crossing {
    int i, j;
    Point witness;
};

struct SimplicityReport {
    bool simple = true;
    std::vector<Crossing> crossings;
};

// Conservative double bounding boxes for prefiltering exact tests.
struct BBoxD {
    double lo[3] = {0, 0, 0}, hi[3] = {0, 0, 0};
    bool init = false;

    void add(const Point& p) {
        double c[3] = {rat_d(p.x), rat_d(p.y), rat_d(p.z)};
        for (int k = 0; k < 3; ++k) {
            double m = 1e-9 * (1.0 + std::fabs(c[k]));
            double l = c[k] - m, h = c[k] + m;
            if (!init) {
                lo[k] = l;
                hi[k] = h;
            } else {
                lo[k] = std::min(lo[k], l);
                hi[k] = std::max(hi[k], h);
            }
        }
        init = true;
    }
};

inline BBoxD bbox_of_segment(const Segment& s) {
    BBoxD b;
    b.add(s.a);
    b.add(s.b);
    return b;
}

inline BBoxD bbox_of_triangle(const Triangle& t) {
    BBoxD b;
    b.add(t.a);
    b.add(t.b);
    b.add(t.c);
    return b;
}

// True only when the boxes are certainly farther apart than sqrt(thresh2).
inline bool bbox_farther_than(const BBoxD& a, const BBoxD& b, double thresh2) {
    double acc = 0;
    for (int k = 0; k < 3; ++k) {
        double g = std::max(a.lo[k] - b.hi[k], b.lo[k] - a.hi[k]);
        if (g > 0) acc += g * g;
    }
    return acc > thresh2 * (1.0 + 1e-6) + 1e-12;
}

inline bool bbox_overlap(const BBoxD& a, const BBoxD& b) {
    for (int k = 0; k < 3; ++k)
        if (a.lo[k] > b.hi[k] || b.lo[k] > a.hi[k]) return false;
    return true;
}

// Exact all-pairs simplicity.  Adjacent segments (cyclically adjacent for a
// closed curve) may share exactly their common endpoint; any other repeated
// point is a violation.  stop_at_first bounds the report size for callers
// that only need the boolean.
inline SimplicityReport is_simple(const PolyCurve& c, bool stop_at_first = false) {
    SimplicityReport rep;
    int n = c.segments();
    bool cyc = c.closed();
    std::vector<BBoxD> boxes(n);
    for (int i = 0; i < n; ++i) boxes[i] = bbox_of_segment(c.seg(i));
    for (int i = 0; i < n && !(stop_at_first && !rep.simple); ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (!bbox_overlap(boxes[i], boxes[j])) continue;
            bool adj = (j == i + 1) || (cyc && i == 0 && j == n - 1);
            auto r = segment_pair_intersection(c.seg(i), c.seg(j));
            if (r.rel == SegRel::disjoint) continue;
            if (adj) {
                const Point& shared = (j == i + 1) ? c.v[j] : c.v[0];
                if (r.rel == SegRel::touching && *r.point == shared) continue;
                // collinear overlap or a touch away from the shared vertex
                rep.simple = false;
                rep.crossings.push_back({i, j, *r.point});
            } else {
                rep.simple = false;
                rep.crossings.push_back({i, j, *r.point});
            }
            if (stop_at_first && !rep.simple) break;
        }
    }
    return rep;
}

// -------- free interval --------

// {u in [0,1] : |p - s(u)|^2 <= eps^2}, a single closed interval by convexity.
inline std::optional<std::pair<Quad, Quad>> free_interval(const Point& p, const Segment& s,
                                                          const Tol& eps) {
    check_same_dim(p, s.a);
    Point d = vsub(s.b, s.a), w = vsub(s.a, p);
    Rat A = norm2(d), B = 2 * dot(w, d), C = norm2(w) - eps.sq;
    if (sgn(A) == 0) {
        if (sgn(C) <= 0) return std::make_pair(Quad(Rat(0)), Quad(Rat(1)));
        return std::nullopt;
    }
    Rat disc = B * B - 4 * A * C;
    if (sgn(disc) < 0) return std::nullopt;
    auto [lo, hi] = quad_roots(A, B, C);
    Quad l = quad_max(lo, Quad(Rat(0)));
    Quad h = quad_min(hi, Quad(Rat(1)));
    if (quad_cmp(l, h) > 0) return std::nullopt;
    return std::make_pair(l, h);
}

}  // namespace curvembed
