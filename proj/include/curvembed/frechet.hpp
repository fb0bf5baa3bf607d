#pragma once
#include <deque>
#include <map>
#include <vector>

#include "freespace.hpp"

namespace curvembed {

namespace detail {

inline Interval1 crop_above(const Interval1& F, const Quad& lo) {
    if (F.empty) return {};
    return interval_of(quad_max(F.lo, lo), F.hi);
}

// free_interval with a conservative double prefilter in front of the exact
// quadratic solve.
inline Interval1 free_iv(const Point& p, const Segment& s, const Tol& eps, double eps2d) {
    BBoxD pb;
    pb.add(p);
    if (bbox_farther_than(pb, bbox_of_segment(s), eps2d)) return {};
    return interval_from(free_interval(p, s, eps));
}

}  // namespace detail

// Monotone-matching (Frechet) decision between two curves, endpoints matched.
// weak = connectivity only (backtracking allowed on both curves).
inline bool curve_frechet_decide(const PolyCurve& f, const PolyCurve& g, const Tol& eps,
                                 bool weak) {
    require(f.dim() == g.dim(), "dimension mismatch");
    int n = f.segments(), m = g.segments();
    double eps2d = rat_d(eps.sq);
    if (dist2(f.v.front(), g.v.front()) > eps.sq) return false;
    if (dist2(f.v.back(), g.v.back()) > eps.sq) return false;

    if (weak) {
        // cell connectivity; shared-edge free intervals computed lazily
        std::vector<char> vis(static_cast<std::size_t>(n) * m, 0);
        std::vector<char> vmemo(static_cast<std::size_t>(n + 1) * m, 2);  // 2 = unknown
        std::vector<char> hmemo(static_cast<std::size_t>(n) * (m + 1), 2);
        auto vopen = [&](int i, int j) -> bool {  // boundary between cells (i-1,j),(i,j)
            char& c = vmemo[static_cast<std::size_t>(i) * m + j];
            if (c == 2)
                c = detail::free_iv(f.v[i], g.seg(j), eps, eps2d).empty ? 0 : 1;
            return c == 1;
        };
        auto hopen = [&](int i, int j) -> bool {  // boundary between cells (i,j-1),(i,j)
            char& c = hmemo[static_cast<std::size_t>(i) * (m + 1) + j];
            if (c == 2)
                c = detail::free_iv(g.v[j], f.seg(i), eps, eps2d).empty ? 0 : 1;
            return c == 1;
        };
        std::deque<std::pair<int, int>> q;
        q.push_back({0, 0});
        vis[0] = 1;
        while (!q.empty()) {
            auto [i, j] = q.front();
            q.pop_front();
            if (i == n - 1 && j == m - 1) return true;
            auto push = [&](int a, int b) {
                if (!vis[static_cast<std::size_t>(a) * m + b]) {
                    vis[static_cast<std::size_t>(a) * m + b] = 1;
                    q.push_back({a, b});
                }
            };
            if (i + 1 < n && vopen(i + 1, j)) push(i + 1, j);
            if (i > 0 && vopen(i, j)) push(i - 1, j);
            if (j + 1 < m && hopen(i, j + 1)) push(i, j + 1);
            if (j > 0 && hopen(i, j)) push(i, j - 1);
        }
        return false;
    }

    // Monotone propagation of reachable boundary intervals, rows bottom-up.
    // H[i]: reachable interval on the horizontal edge below the current row's
    // cell in column i (parameter: s on f.seg(i)).
    std::vector<Interval1> H(n);
    // bottom boundary: walk along g fixed at its start
    {
        bool connected = true;
        for (int i = 0; i < n; ++i) {
            Interval1 F = detail::free_iv(g.v[0], f.seg(i), eps, eps2d);
            if (connected && !F.empty && quad_sign(F.lo) == 0) {
                H[i] = F;
                connected = interval_contains(F, Quad(Rat(1)));
            } else {
                H[i] = {};
                connected = false;
            }
        }
    }
    bool left_connected = true;  // left boundary walk along f's start
    for (int j = 0; j < m; ++j) {
        Interval1 V;  // reachable interval entering column i from the left
        {
            Interval1 F = detail::free_iv(f.v[0], g.seg(j), eps, eps2d);
            if (left_connected && !F.empty && quad_sign(F.lo) == 0) {
                V = F;
                left_connected = interval_contains(F, Quad(Rat(1)));
            } else {
                V = {};
                left_connected = false;
            }
        }
        for (int i = 0; i < n; ++i) {
            const Interval1& L = V;
            const Interval1& B = H[i];
            Interval1 R, T;
            if (!L.empty || !B.empty) {
                Interval1 FR = detail::free_iv(f.v[i + 1], g.seg(j), eps, eps2d);
                Interval1 FT = detail::free_iv(g.v[j + 1], f.seg(i), eps, eps2d);
                R = !B.empty ? FR : detail::crop_above(FR, L.lo);
                T = !L.empty ? FT : detail::crop_above(FT, B.lo);
            }
            V = R;
            H[i] = T;
        }
        if (j == m - 1) {
            if (interval_contains(V, Quad(Rat(1)))) return true;
        }
    }
    return n > 0 && interval_contains(H[n - 1], Quad(Rat(1)));
}

// Bisection bracket [lo, hi] with hi - lo <= tol, decide(hi) = yes.
inline std::pair<Rat, Rat> curve_frechet_value(const PolyCurve& f, const PolyCurve& g, bool weak,
                                               const Rat& tol) {
    require(sgn(tol) > 0, "tolerance must be positive");
    if (curve_frechet_decide(f, g, tol_of_value(rat(0)), weak)) return {rat(0), rat(0)};
    Rat d2max(0);
    for (const auto& p : f.v)
        for (const auto& q : g.v) d2max = rat_max(d2max, dist2(p, q));
    Rat hi = quad_bracket(quad_sqrt(d2max), tol / 2).second;
    require(curve_frechet_decide(f, g, tol_of_value(hi), weak),
            "upper bound failed to decide yes");
    Rat lo(0);
    while (hi - lo > tol) {
        Rat mid = (lo + hi) / 2;
        if (curve_frechet_decide(f, g, tol_of_value(mid), weak))
            hi = mid;
        else
            lo = mid;
    }
    return {lo, hi};
}

namespace detail {

// One quadratic piece of the squared distance from a moving point x(s) to a
// fixed segment, with a validity window in s given by linear conditions.
struct DistPiece {
    Rat A, B, C;          // value = A s^2 + B s + C on the valid window
    Rat fa, fb;           // validity: flo <= fa*s + fb <= fhi
    Rat flo, fhi;
    bool whole = false;   // valid everywhere
};

inline Quad eval_quad_poly(const Rat& A, const Rat& B, const Rat& C, const Quad& s) {
    // s = a + b sqrt(r): s^2 = a^2 + b^2 r + 2ab sqrt(r)
    Rat s2a = s.a * s.a + s.b * s.b * s.r;
    Rat s2b = 2 * s.a * s.b;
    return Quad(A * s2a + B * s.a + C, A * s2b + B * s.b, s.r);
}

inline bool piece_valid_at(const DistPiece& P, const Quad& s) {
    if (P.whole) return true;
    Quad v = eval_quad_poly(Rat(0), P.fa, P.fb, s);
    return quad_cmp(v, Quad(P.flo)) >= 0 && quad_cmp(v, Quad(P.fhi)) <= 0;
}

// The three pieces of s -> dist^2(x(s), seg), x(s) = p + s u.
inline std::vector<DistPiece> dist_pieces(const Point& p, const Point& u, const Segment& g) {
    Point d = vsub(g.b, g.a);
    Rat dd = norm2(d);
    Point w0 = vsub(p, g.a);
    Rat a0 = dot(w0, d), a1 = dot(u, d);  // foot*dd = a0 + a1 s
    std::vector<DistPiece> out;
    auto endpoint_piece = [&](const Point& e, bool low_side) {
        Point w = vsub(p, e);
        DistPiece P;
        P.A = norm2(u);
        P.B = 2 * dot(w, u);
        P.C = norm2(w);
        P.fa = a1;
        P.fb = a0;
        if (low_side) {
            // foot <= 0
            P.flo = -(rat_abs(a0) + rat_abs(a1) + 1);
            P.fhi = 0;
        } else {
            P.flo = dd;
            P.fhi = rat_abs(a0) + rat_abs(a1) + dd + 1;
        }
        out.push_back(P);
    };
    endpoint_piece(g.a, true);
    endpoint_piece(g.b, false);
    // interior piece: |w(s)|^2 - (w(s).d)^2/dd, w(s) = w0 + s u
    DistPiece L;
    L.A = norm2(u) - a1 * a1 / dd;
    L.B = 2 * dot(w0, u) - 2 * a0 * a1 / dd;
    L.C = norm2(w0) - a0 * a0 / dd;
    L.fa = a1;
    L.fb = a0;
    L.flo = 0;
    L.fhi = dd;
    out.push_back(L);
    return out;
}

inline Quad directed_hausdorff2(const PolyCurve& f, const PolyCurve& g) {
    Quad M(Rat(0));
    int m = g.segments();
    auto min_dist2_at = [&](const Point& x) -> Rat {
        Rat best = point_segment_dist2(x, g.seg(0));
        for (int j = 1; j < m; ++j) {
            Rat d = point_segment_dist2(x, g.seg(j));
            if (d < best) best = d;
        }
        return best;
    };
    for (const auto& p : f.v) {
        Quad v(min_dist2_at(p));
        if (quad_cmp(v, M) > 0) M = v;
    }
    for (int i = 0; i < f.segments(); ++i) {
        Segment seg = f.seg(i);
        Point u = vsub(seg.b, seg.a);
        std::vector<std::vector<DistPiece>> pieces(m);
        for (int j = 0; j < m; ++j) pieces[j] = dist_pieces(seg.a, u, g.seg(j));
        // upper bound for this segment: some single target segment's max
        Rat U = rat_max(point_segment_dist2(seg.a, g.seg(0)), point_segment_dist2(seg.b, g.seg(0)));
        for (int j = 1; j < m; ++j) {
            Rat c = rat_max(point_segment_dist2(seg.a, g.seg(j)),
                            point_segment_dist2(seg.b, g.seg(j)));
            if (c < U) U = c;
        }
        // exact piecewise-quadratic min at an algebraic parameter
        auto envelope_at = [&](const Quad& s) -> Quad {
            bool have = false;
            Quad best;
            for (int j = 0; j < m; ++j)
                for (const DistPiece& P : pieces[j]) {
                    if (!piece_valid_at(P, s)) continue;
                    Quad v = eval_quad_poly(P.A, P.B, P.C, s);
                    if (!have || quad_cmp(v, best) < 0) {
                        best = v;
                        have = true;
                    }
                }
            require(have, "distance pieces must cover the parameter");
            return best;
        };
        // candidate maxima: crossings of two pieces of different targets
        for (int j = 0; j < m; ++j)
            for (int k = j + 1; k < m; ++k)
                for (const DistPiece& Pj : pieces[j])
                    for (const DistPiece& Pk : pieces[k]) {
                        Rat A = Pj.A - Pk.A, B = Pj.B - Pk.B, C = Pj.C - Pk.C;
                        std::vector<Quad> roots;
                        if (sgn(A) == 0) {
                            if (sgn(B) != 0) roots.push_back(Quad(-C / B));
                        } else {
                            Rat disc = B * B - 4 * A * C;
                            if (sgn(disc) >= 0) {
                                auto [r1, r2] = quad_roots(A, B, C);
                                roots.push_back(r1);
                                if (quad_cmp(r1, r2) != 0) roots.push_back(r2);
                            }
                        }
                        for (const Quad& s : roots) {
                            if (quad_cmp(s, Quad(Rat(0))) < 0 || quad_cmp(s, Quad(Rat(1))) > 0)
                                continue;
                            if (!piece_valid_at(Pj, s) || !piece_valid_at(Pk, s)) continue;
                            Quad v = eval_quad_poly(Pj.A, Pj.B, Pj.C, s);
                            if (quad_cmp(v, M) <= 0) continue;
                            if (quad_cmp(v, Quad(U)) > 0) continue;  // not on the envelope
                            Quad env = envelope_at(s);
                            if (quad_cmp(env, M) > 0) M = env;
                        }
                    }
    }
    return M;
}

}  // namespace detail

// Symmetric Hausdorff distance, exact, returned SQUARED.  The maximizer can
// sit at an algebraic bisector point, hence the algebraic return type; on
// inputs whose extrema are realized at vertices or rational feet the result
// is rational.
inline Quad hausdorff_dist2(const PolyCurve& f, const PolyCurve& g) {
    require(f.dim() == g.dim(), "dimension mismatch");
    Quad a = detail::directed_hausdorff2(f, g);
    Quad b = detail::directed_hausdorff2(g, f);
    return quad_max(a, b);
}

}  // namespace curvembed
