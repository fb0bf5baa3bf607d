#pragma once
// Compiler from planar 3-CNF formulas to curve-embedding instances.
//
// The incidence graph of the formula is drawn in the plane, walked depth-first
// (the stringing walk), and turned into one long polygonal signal curve f plus
// a surface.  Every maximal stretch of f that can move independently is a
// "unit" carrying two or three corridor polylines (T / F / F2); a valid
// embedding must pick one corridor per wire (a wire groups the units that share
// a side choice) so that the chosen corridors concatenate into a simple curve.
// Crossing tiles placed in the angular wedges between street ports make
// exactly the intended combinations collide:
//   - every variable wedge forbids (incoming T, outgoing F), which around the
//     full ring of wedges forces all of a variable's street sides equal;
//   - clause tiles forbid (s1.F, s2.F) and (s2.F2, s3.F), so the middle
//     street's false options both collide once all three literals are false;
//   - inverter stations on negated streets forbid (in.T, out.T) and
//     (in.F, out.F), so the outgoing side is the negation of the incoming one.
// Geometry is exact rational throughout.  All local template constants are in
// units of u = eps/32 and were chosen so that allowed corridor combinations
// are pairwise disjoint while forbidden ones must cross; the accompanying
// tests audit exactly that, plus the Frechet tube between each unit's piece of
// f and each of its corridors.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"
#include "formula.hpp"
#include "frechet.hpp"
#include "gadgets.hpp"
#include "geom.hpp"
#include "io.hpp"
#include "layout.hpp"
#include "surface.hpp"

namespace curvembed {

// ---------------------------------------------------------------------------
// Public instance model.

struct GadgetWire {
    int id = -1;
    int edge = -1;       // layout edge this wire rides on
    bool inbound = true; // carries the variable-side value (false: literal value)
    bool has_f2 = false; // third side option (middle street of a clause)
};

struct GadgetConflict {
    int unit_a, opt_a, unit_b, opt_b;  // chosen together => corridors must cross
};

struct GadgetUnit {
    std::string kind;    // signal | stringing | holecurve
    std::string gadget;  // owning gadget label
    int wire = -1;       // wire id, -1 = fixed piece (single corridor)
    std::vector<Point> piece;                    // subcurve of f
    std::vector<std::vector<Point>> corridors;   // [T] or [T,F] or [T,F,F2]
};

struct GadgetInstance {
    Formula3CNF formula;     // as given
    Formula3CNF normalized;  // after variable flips (walk-orientation form)
    std::vector<char> flipped;
    GraphLayout layout;
    StringingOrder order;
    GadgetMode mode;
    GadgetParams params;
    Rat eps;
    PolyCurve f;
    TriSurface surface;
    std::vector<GadgetUnit> units;
    std::vector<GadgetWire> wires;
    std::vector<GadgetConflict> conflicts;
    std::vector<std::vector<Point>> holes;  // hole polygons (holes/terrain modes)

    InstanceMeta meta() const {
        InstanceMeta m;
        m.eps = eps;
        m.target = mode == GadgetMode::frechet_holes   ? "holes"
                   : mode == GadgetMode::frechet_plane ? "plane"
                                                       : "terrain";
        m.weak = (mode == GadgetMode::weak_terrain);
        return m;
    }
    std::vector<UnitRecord> records() const;
};

namespace detail {

// ---------------------------------------------------------------------------
// Small exact-arithmetic helpers.

inline Point rot90ccw(const Point& v) { return pt(-v.y, v.x); }

inline mpz_class floor_div(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline mpz_class ceil_rat(const Rat& q) {
    mpz_class num = q.get_num(), den = q.get_den();  // den > 0
    mpz_class fl = floor_div(num, den);
    if (Rat(fl) < q) ++fl;
    return fl;
}

// Smallest integer k >= 0 with k*k >= q.
inline mpz_class ceil_sqrt_rat(const Rat& q) {
    if (sgn(q) <= 0) return 0;
    mpz_class c = ceil_rat(q);
    mpz_class k = sqrt(c);  // floor sqrt
    while (Rat(k * k) < q) ++k;
    return k;
}

// Rational vector of length in [1 - 2^-32, 1] parallel to d (d != 0).
inline Point approx_unit(const Point& d) {
    require(d.dim == 2, "approx_unit: 2d only");
    Rat n2 = norm2(d);
    require(sgn(n2) > 0, "approx_unit: zero vector");
    Point e = d;
    while (n2 >= rat(4)) {
        e = vscale(e, rat(1, 2));
        n2 = n2 / rat(4);
    }
    while (n2 < rat(1)) {
        e = vscale(e, rat(2));
        n2 = n2 * rat(4);
    }
    const mpz_class N = mpz_class(1) << 32;
    mpz_class num = floor_div(n2.get_num() * N * N, n2.get_den());
    mpz_class r = sqrt(num);
    mpq_class s(r + 1, N);
    s.canonicalize();
    return vscale(e, Rat(rat(1) / Rat(s)));
}

inline void push_pt(std::vector<Point>& v, const Point& p) {
    if (!v.empty() && v.back().x == p.x && v.back().y == p.y) return;
    v.push_back(p);
}

inline void push_all(std::vector<Point>& v, const std::vector<Point>& w) {
    for (const auto& p : w) push_pt(v, p);
}

inline Rat point_seg_d2(const Point& q, const Point& a, const Point& b) {
    Point ab = vsub(b, a);
    Rat den = norm2(ab);
    if (sgn(den) == 0) return dist2(q, a);
    Rat t = dot(vsub(q, a), ab) / den;
    if (t < rat(0)) t = rat(0);
    if (t > rat(1)) t = rat(1);
    Point c = vadd(a, vscale(ab, t));
    return dist2(q, c);
}

// ---------------------------------------------------------------------------
// Frames: affine charts with template coordinates in u-units.

struct Frame {
    Point O, ex, ey;  // ex/ey approx-unit vectors
    Rat u;
    Point at(const Rat& x, const Rat& y) const {
        return vadd(O, vadd(vscale(ex, x * u), vscale(ey, y * u)));
    }
    Point at(long x, long y) const { return at(rat(x), rat(y)); }
};

// ---------------------------------------------------------------------------
// Compiler implementation state.

struct LaneGeom {
    int edge = -1;
    Point rayV, rayC;    // outward unit rays at the two ports
    Point portV, portC;  // port origins (on the rays at rim distance)
    Point dirL, perpL;   // lane direction v->c and its ccw normal
    Rat len;             // lane length (port to port), approx euclidean
    Frame laneF;         // (s along lane from portV, w lateral ccw)
    Frame portVF, portCF;  // port charts: (t ccw-tangential, d depth into box)
};

struct TileShape {
    Point wn, en, ws, es;
    std::vector<Point> wedgeN, wedgeS;  // triangles (ccw)
};

struct WedgeInfo {
    int vert = -1;
    int eA = -1, eB = -1;  // ccw-consecutive incident edges (eA then eB)
    bool at_clause = false;
    bool wide = false;
    bool tiled = false;
    bool antipode = false;  // degree-1 pseudo-wedge
    Frame fr;               // annulus chart at the wedge anchor
    TileShape tile;
    // slot usage
    bool used_mid = false, used_W = false, used_E = false;
    int w_unit = -1, e_unit = -1;  // units owning the W / E half
    int arr_depth = 0, dep_depth = 0;  // link depths (u-units, negative), 0 = none
    bool arr_east = false, dep_east = false;
};

struct StationInfo {
    int edge = -1;
    bool a_side = false;  // true: on the variable->clause strand
    Frame fr;
    TileShape tile;
    int w_unit = -1, e_unit = -1;
};

struct Interaction {
    int vert;
    int e_in, e_out;  // -1 at the walk's two ends (start variable)
};

class Compiler {
  public:
    Compiler(const Formula3CNF& F, GadgetMode mode, const Rat& eps)
        : F_(F), mode_(mode), eps_(eps), u_(eps / rat(32)) {}

    GadgetInstance run();

  private:
    // ---- inputs / global state ----
    Formula3CNF F_, Fn_;
    GadgetMode mode_;
    Rat eps_, u_;
    GraphLayout L_;
    StringingOrder order_;
    std::vector<char> flipped_;
    std::vector<char> negated_;  // per edge, under Fn_
    std::vector<int> wire_in_, wire_out_;
    std::vector<GadgetWire> wires_;
    std::vector<Point> vpos_;      // scaled vertex positions
    std::vector<Rat> rimU_, rbU_;  // per vertex, in u-units
    std::vector<LaneGeom> lanes_;
    std::vector<std::vector<Point>> ring_;       // per vertex: ccw dir ring
    std::vector<std::vector<int>> ray_index_;    // per vertex: ring index of each rotation entry
    std::vector<WedgeInfo> wedges_;
    std::map<std::pair<int, int>, int> wedge_by_eA_;  // (vert, eA) -> wedge idx
    std::vector<StationInfo> stations_;
    std::map<std::pair<int, int>, int> station_by_;  // (edge, a_side) -> idx
    std::vector<int> clause_s1_;                     // per clause: discovery edge
    std::vector<Interaction> inter_;
    std::vector<std::vector<Point>> holes_;  // hole polygons
    std::vector<GadgetUnit> units_;
    std::vector<GadgetConflict> conflicts_;
    std::vector<char> street_seen_;  // first-traversal marker
    std::vector<int> clause_linkn_;  // links emitted per clause

    // ---- phases ----
    void normalize();
    void make_wires();
    void build_walk();
    void build_geometry();
    void build_wedges();
    void build_stations();
    void emit_all();
    void emit_interaction(std::size_t k);
    int emit_w_half(const Interaction& it, WedgeInfo& Z, char slot);
    int emit_e_half(const Interaction& it, WedgeInfo& Z, char slot);
    void emit_link(WedgeInfo& A, WedgeInfo& B, bool ccw, int depth,
                   const std::string& label);
    void emit_street(int e, int from, int to);
    void emit_plane_loop(const LaneGeom& ln, bool from_v, const std::string& label);
    void emit_conflicts();
    void build_surface(GadgetInstance& inst);
    void finish(GadgetInstance& inst);

    // ---- geometry helpers ----
    int wedge_of(int vert, int eA) const {
        auto itr = wedge_by_eA_.find({vert, eA});
        require(itr != wedge_by_eA_.end(), "missing wedge");
        return itr->second;
    }
    int ccw_next_edge(int vert, int e) const;
    int ccw_prev_edge(int vert, int e) const;
    bool is_clause(int vert) const { return vert >= L_.nvars; }
    const LaneGeom& lane(int e) const { return lanes_[static_cast<std::size_t>(e)]; }
    const Frame& port_at(int e, int vert) const {
        const LaneGeom& ln = lane(e);
        return L_.edges[static_cast<std::size_t>(e)].var == vert ? ln.portVF : ln.portCF;
    }
    // dir-ring position of a point around vertex v: index i with
    // P in [ring[i], ring[i+1]) in ccw order.
    int ring_locate(int vert, const Point& P) const;
    // arc at |radius_u|*u around vertex, between the two given points' angular
    // positions, sweeping ccw or cw; returns intermediate ring-dir points only.
    std::vector<Point> arc_between(int vert, const Rat& radius_u, const Point& from,
                                   const Point& to, bool ccw) const;
    // corridor connectors: port-side descent + arc + approach to a wedge-frame point
    std::vector<Point> w_entry(int vert, int e_in, const WedgeInfo& Z, long t,
                               const Rat& row) const;
    std::vector<Point> e_exit(int vert, int e_out, const WedgeInfo& Z, long t,
                              const Rat& row) const;

    int add_unit(const std::string& kind, const std::string& gadget, int wire,
                 std::vector<Point> piece, std::vector<std::vector<Point>> cors) {
        GadgetUnit un;
        un.kind = kind;
        un.gadget = gadget;
        un.wire = wire;
        un.piece = std::move(piece);
        un.corridors = std::move(cors);
        require(un.piece.size() >= 2, "unit piece too short");
        for (auto& c : un.corridors) {
            require(c.size() >= 2, "corridor too short");
            require(c.front().x == un.piece.front().x && c.front().y == un.piece.front().y,
                    "corridor start != piece start");
            require(c.back().x == un.piece.back().x && c.back().y == un.piece.back().y,
                    "corridor end != piece end");
        }
        units_.push_back(std::move(un));
        return static_cast<int>(units_.size()) - 1;
    }

    std::string vlabel(int vert) const {
        if (is_clause(vert)) return "clause " + std::to_string(vert - L_.nvars + 1);
        return "variable " + std::to_string(vert + 1);
    }
};

// ---------------------------------------------------------------------------
// Rotation neighbours.

inline int Compiler::ccw_next_edge(int vert, int e) const {
    const auto& rot = L_.rotation[static_cast<std::size_t>(vert)];
    for (std::size_t i = 0; i < rot.size(); ++i)
        if (rot[i] == e) return rot[(i + 1) % rot.size()];
    fail("edge not in rotation");
}

inline int Compiler::ccw_prev_edge(int vert, int e) const {
    const auto& rot = L_.rotation[static_cast<std::size_t>(vert)];
    for (std::size_t i = 0; i < rot.size(); ++i)
        if (rot[i] == e) return rot[(i + rot.size() - 1) % rot.size()];
    fail("edge not in rotation");
}

// ---------------------------------------------------------------------------
// Phase: normalization.  A variable is flipped when the literal of its
// discovery occurrence is negative, so discovery streets are always positive.

inline void Compiler::normalize() {
    L_ = planar_layout(F_);
    order_ = stringing_order(L_, 0);
    flipped_.assign(static_cast<std::size_t>(F_.nvars), 0);
    for (const auto& st : order_.steps) {
        if (!st.discover || st.to >= L_.nvars) continue;
        const LayoutEdge& le = L_.edges[static_cast<std::size_t>(st.edge)];
        int lit = F_.clauses[static_cast<std::size_t>(le.clause - L_.nvars)]
                            [static_cast<std::size_t>(le.slot)];
        flipped_[static_cast<std::size_t>(st.to)] = lit < 0 ? 1 : 0;
    }
    Fn_ = F_;
    for (auto& c : Fn_.clauses)
        for (int& lit : c)
            if (flipped_[static_cast<std::size_t>(lit_var(lit))]) lit = -lit;
    negated_.assign(L_.edges.size(), 0);
    for (std::size_t e = 0; e < L_.edges.size(); ++e) {
        const LayoutEdge& le = L_.edges[e];
        int lit = Fn_.clauses[static_cast<std::size_t>(le.clause - L_.nvars)]
                             [static_cast<std::size_t>(le.slot)];
        negated_[e] = lit < 0 ? 1 : 0;
    }
}

// ---------------------------------------------------------------------------
// Phase: wires.  One wire per street side: the inbound wire carries the
// variable's value, the outbound wire the literal's value (distinct only on
// negated streets).  The outbound wire of each clause's s2 street gets the
// third option F2.

inline void Compiler::make_wires() {
    wire_in_.assign(L_.edges.size(), -1);
    wire_out_.assign(L_.edges.size(), -1);
    for (std::size_t e = 0; e < L_.edges.size(); ++e) {
        GadgetWire w;
        w.id = static_cast<int>(wires_.size());
        w.edge = static_cast<int>(e);
        w.inbound = true;
        wire_in_[e] = w.id;
        wires_.push_back(w);
        if (negated_[e]) {
            GadgetWire w2;
            w2.id = static_cast<int>(wires_.size());
            w2.edge = static_cast<int>(e);
            w2.inbound = false;
            wire_out_[e] = w2.id;
            wires_.push_back(w2);
        } else {
            wire_out_[e] = w.id;
        }
    }
    for (int c = 0; c < L_.nclauses; ++c) {
        int s1 = clause_s1_[static_cast<std::size_t>(c)];
        int s2 = ccw_next_edge(L_.clause_vertex(c), s1);
        wires_[static_cast<std::size_t>(wire_out_[static_cast<std::size_t>(s2)])].has_f2 =
            true;
    }
}

// ---------------------------------------------------------------------------
// Phase: walk analysis -> interactions and clause discovery streets.

inline void Compiler::build_walk() {
    clause_s1_.assign(static_cast<std::size_t>(L_.nclauses), -1);
    for (const auto& st : order_.steps)
        if (st.discover && st.to >= L_.nvars)
            clause_s1_[static_cast<std::size_t>(st.to - L_.nvars)] = st.edge;
    for (int c = 0; c < L_.nclauses; ++c)
        require(clause_s1_[static_cast<std::size_t>(c)] >= 0, "undiscovered clause");

    int pos = order_.start;
    int arrived = -1;
    for (const auto& st : order_.steps) {
        require(st.from == pos, "walk discontinuity");
        inter_.push_back({pos, arrived, st.edge});
        arrived = st.edge;
        pos = st.to;
    }
    require(pos == order_.start, "walk must close at the start variable");
    inter_.push_back({pos, arrived, -1});
}

// ---------------------------------------------------------------------------
// Phase: scaled geometry scaffold (rays, ports, lanes, scale factor).

inline void Compiler::build_geometry() {
    const int V = L_.nverts();
    // Realized outward rays per rotation entry: parallel bundles get tilts so
    // that every incident pair is a genuine angular wedge.
    std::vector<std::vector<Point>> rays(static_cast<std::size_t>(V));
    std::vector<std::map<int, Point>> ray_of(static_cast<std::size_t>(V));
    // bundle rank per edge (ascending edge id within a (var,clause) bundle)
    std::map<std::pair<int, int>, std::vector<int>> bundles;
    for (std::size_t e = 0; e < L_.edges.size(); ++e)
        bundles[{L_.edges[e].var, L_.edges[e].clause}].push_back(static_cast<int>(e));
    std::vector<Rat> tiltV(L_.edges.size()), tiltC(L_.edges.size());
    for (auto& [vc, es] : bundles) {
        std::sort(es.begin(), es.end());
        int k = static_cast<int>(es.size());
        require(k <= 3, "bundle too large");
        for (int i = 0; i < k; ++i) {
            Rat t = Rat(rat(2 * i - (k - 1), 4));  // (i - (k-1)/2) / 2
            tiltV[static_cast<std::size_t>(es[static_cast<std::size_t>(i)])] = t;
            tiltC[static_cast<std::size_t>(es[static_cast<std::size_t>(i)])] = -t;
        }
    }
    for (int v = 0; v < V; ++v) {
        for (int e : L_.rotation[static_cast<std::size_t>(v)]) {
            const LayoutEdge& le = L_.edges[static_cast<std::size_t>(e)];
            int other = le.var == v ? le.clause : le.var;
            Point d = vsub(L_.pos[static_cast<std::size_t>(other)],
                           L_.pos[static_cast<std::size_t>(v)]);
            Point dirU = approx_unit(d);
            Point perp = rot90ccw(dirU);
            Rat tilt = le.var == v ? tiltV[static_cast<std::size_t>(e)]
                                   : tiltC[static_cast<std::size_t>(e)];
            Point ray = approx_unit(vadd(dirU, vscale(perp, tilt)));
            rays[static_cast<std::size_t>(v)].push_back(ray);
            ray_of[static_cast<std::size_t>(v)][e] = ray;
        }
    }
    // Orientation sanity: realized rays must be ccw in rotation order.
    for (int v = 0; v < V; ++v) {
        const auto& rr = rays[static_cast<std::size_t>(v)];
        if (rr.size() >= 2)
            for (std::size_t i = 0; i + 1 < rr.size(); ++i)
                require(sgn(cross2(rr[i], rr[i + 1])) != 0 ||
                            sgn(dot(rr[i], rr[i + 1])) < 0,
                        "degenerate aligned lanes");
    }
    // Box radii: R >= 512u and R*sin(theta) >= ~960u for every cyclically
    // consecutive realized pair.
    rbU_.assign(static_cast<std::size_t>(V), rat(512));
    for (int v = 0; v < V; ++v) {
        const auto& rr = rays[static_cast<std::size_t>(v)];
        std::size_t n = rr.size();
        if (n < 2) continue;
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = rr[i];
            const Point& b = rr[(i + 1) % n];
            Rat c = cross2(a, b);
            if (sgn(c) < 0) c = -c;
            if (sgn(c) == 0) continue;  // antipodal pair: no constraint
            Rat need = rat(480) * (norm2(a) + norm2(b)) / c;
            Rat ceiln = Rat(ceil_rat(need));
            if (ceiln > rbU_[static_cast<std::size_t>(v)])
                rbU_[static_cast<std::size_t>(v)] = ceiln;
        }
    }
    rimU_.assign(static_cast<std::size_t>(V), rat(0));
    Rat rim_max = rat(0);
    for (int v = 0; v < V; ++v) {
        rimU_[static_cast<std::size_t>(v)] = rbU_[static_cast<std::size_t>(v)] + rat(64);
        if (rimU_[static_cast<std::size_t>(v)] > rim_max)
            rim_max = rimU_[static_cast<std::size_t>(v)];
    }
    // Scale: sigma = K*u, K integer.
    mpz_class K = 1;
    {
        // clearance between non-incident drawn features
        Rat d2min(0);
        bool have = false;
        auto upd = [&](const Rat& d2) {
            if (sgn(d2) <= 0) return;
            if (!have || d2 < d2min) {
                d2min = d2;
                have = true;
            }
        };
        for (int a = 0; a < V; ++a)
            for (int b = a + 1; b < V; ++b)
                upd(dist2(L_.pos[static_cast<std::size_t>(a)],
                          L_.pos[static_cast<std::size_t>(b)]));
        for (int a = 0; a < V; ++a)
            for (std::size_t e = 0; e < L_.edges.size(); ++e) {
                const LayoutEdge& le = L_.edges[e];
                if (le.var == a || le.clause == a) continue;
                upd(point_seg_d2(L_.pos[static_cast<std::size_t>(a)],
                                 L_.pos[static_cast<std::size_t>(le.var)],
                                 L_.pos[static_cast<std::size_t>(le.clause)]));
            }
        require(have, "degenerate layout");
        Rat clear_u = rat(4) * rim_max + rat(1024);
        mpz_class k1 = ceil_sqrt_rat(clear_u * clear_u / d2min);
        if (k1 > K) K = k1;
        for (const auto& le : L_.edges) {
            Rat len2 = dist2(L_.pos[static_cast<std::size_t>(le.var)],
                             L_.pos[static_cast<std::size_t>(le.clause)]);
            Rat need = rimU_[static_cast<std::size_t>(le.var)] +
                       rimU_[static_cast<std::size_t>(le.clause)] + rat(1600);
            mpz_class k2 = ceil_sqrt_rat(need * need / len2);
            if (k2 > K) K = k2;
        }
    }
    Rat sigma = Rat(K) * u_;
    vpos_.resize(static_cast<std::size_t>(V));
    for (int v = 0; v < V; ++v)
        vpos_[static_cast<std::size_t>(v)] =
            vscale(L_.pos[static_cast<std::size_t>(v)], sigma);

    // Lanes.
    lanes_.resize(L_.edges.size());
    for (std::size_t e = 0; e < L_.edges.size(); ++e) {
        const LayoutEdge& le = L_.edges[e];
        LaneGeom ln;
        ln.edge = static_cast<int>(e);
        ln.rayV = ray_of[static_cast<std::size_t>(le.var)][static_cast<int>(e)];
        ln.rayC = ray_of[static_cast<std::size_t>(le.clause)][static_cast<int>(e)];
        ln.portV = vadd(vpos_[static_cast<std::size_t>(le.var)],
                        vscale(ln.rayV, rimU_[static_cast<std::size_t>(le.var)] * u_));
        ln.portC = vadd(vpos_[static_cast<std::size_t>(le.clause)],
                        vscale(ln.rayC, rimU_[static_cast<std::size_t>(le.clause)] * u_));
        Point d = vsub(ln.portC, ln.portV);
        ln.dirL = approx_unit(d);
        ln.perpL = rot90ccw(ln.dirL);
        ln.len = dot(d, ln.dirL) / norm2(ln.dirL) / u_;  // in u-units
        require(ln.len > rat(1500), "street too short");
        ln.laneF = Frame{ln.portV, ln.dirL, ln.perpL, u_};
        ln.portVF = Frame{ln.portV, rot90ccw(ln.rayV), vscale(ln.rayV, rat(-1)), u_};
        ln.portCF = Frame{ln.portC, rot90ccw(ln.rayC), vscale(ln.rayC, rat(-1)), u_};
        lanes_[e] = ln;
    }

    // Direction rings (shared angular subdivision per vertex).
    ring_.assign(static_cast<std::size_t>(V), {});
    ray_index_.assign(static_cast<std::size_t>(V), {});
    auto subdiv = [](const Point& a, const Point& b, auto&& self,
                     std::vector<Point>& out) -> void {
        Rat cr = cross2(a, b), dt = dot(a, b);
        bool fine = sgn(cr) > 0 && sgn(dt) > 0 && cr * rat(16) <= dt;
        if (fine) return;
        Point m;
        if (sgn(cr) > 0)
            m = approx_unit(vadd(a, b));
        else if (sgn(cr) < 0)
            m = approx_unit(vscale(vadd(a, b), rat(-1)));
        else  // antipodal
            m = approx_unit(rot90ccw(a));
        self(a, m, self, out);
        out.push_back(m);
        self(m, b, self, out);
    };
    for (int v = 0; v < V; ++v) {
        const auto& rr = rays[static_cast<std::size_t>(v)];
        auto& ring = ring_[static_cast<std::size_t>(v)];
        auto& ridx = ray_index_[static_cast<std::size_t>(v)];
        if (rr.empty()) continue;
        std::size_t n = rr.size();
        for (std::size_t i = 0; i < n; ++i) {
            ridx.push_back(static_cast<int>(ring.size()));
            ring.push_back(rr[i]);
            const Point& a = rr[i];
            const Point& b = rr[(i + 1) % n];
            if (n == 1) {
                // full circle: split in quarters first
                Point q1 = approx_unit(rot90ccw(a));
                Point q2 = approx_unit(vscale(a, rat(-1)));
                Point q3 = approx_unit(vscale(q1, rat(-1)));
                subdiv(a, q1, subdiv, ring);
                ring.push_back(q1);
                subdiv(q1, q2, subdiv, ring);
                ring.push_back(q2);
                subdiv(q2, q3, subdiv, ring);
                ring.push_back(q3);
                subdiv(q3, a, subdiv, ring);
            } else {
                subdiv(a, b, subdiv, ring);
            }
        }
    }
}

inline int Compiler::ring_locate(int vert, const Point& P) const {
    const auto& ring = ring_[static_cast<std::size_t>(vert)];
    Point d = vsub(P, vpos_[static_cast<std::size_t>(vert)]);
    std::size_t n = ring.size();
    require(n >= 2, "ring too small");
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = ring[i];
        const Point& b = ring[(i + 1) % n];
        // d in [a, b) ccw: step a->b is < 90 degrees, so use sign tests
        bool geA = sgn(cross2(a, d)) > 0 || (sgn(cross2(a, d)) == 0 && sgn(dot(a, d)) > 0);
        bool ltB = sgn(cross2(d, b)) > 0;
        if (geA && ltB) return static_cast<int>(i);
    }
    fail("ring_locate failed");
}

inline std::vector<Point> Compiler::arc_between(int vert, const Rat& radius_u,
                                                const Point& from, const Point& to,
                                                bool ccw) const {
    const auto& ring = ring_[static_cast<std::size_t>(vert)];
    const Point& V = vpos_[static_cast<std::size_t>(vert)];
    int n = static_cast<int>(ring.size());
    int i0 = ring_locate(vert, from);
    int i1 = ring_locate(vert, to);
    std::vector<Point> out;
    Rat r = radius_u * u_;
    if (ccw) {
        int i = (i0 + 1) % n;
        // emit ring dirs strictly after `from`, up to and including index i1
        int guard = 0;
        while (true) {
            require(++guard <= n + 2, "arc sweep overflow");
            out.push_back(vadd(V, vscale(ring[static_cast<std::size_t>(i)], r)));
            if (i == i1) break;
            i = (i + 1) % n;
        }
    } else {
        int i = i0;
        int guard = 0;
        while (true) {
            require(++guard <= n + 2, "arc sweep overflow");
            out.push_back(vadd(V, vscale(ring[static_cast<std::size_t>(i)], r)));
            if (i == (i1 + 1) % n) break;
            i = (i + n - 1) % n;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Wedge construction.

inline void Compiler::build_wedges() {
    const int V = L_.nverts();
    for (int v = 0; v < V; ++v) {
        const auto& rot = L_.rotation[static_cast<std::size_t>(v)];
        if (rot.empty()) continue;
        std::size_t n = rot.size();
        for (std::size_t i = 0; i < n; ++i) {
            WedgeInfo W;
            W.vert = v;
            W.eA = rot[i];
            W.eB = rot[(i + 1) % n];
            W.at_clause = is_clause(v);
            W.wide = !W.at_clause;
            W.antipode = (n == 1);
            Point rayA = vsub(port_at(W.eA, v).O, vpos_[static_cast<std::size_t>(v)]);
            Point bis;
            if (W.antipode) {
                bis = approx_unit(vscale(rayA, rat(-1)));
            } else {
                Point rayB = vsub(port_at(W.eB, v).O, vpos_[static_cast<std::size_t>(v)]);
                Point a = approx_unit(rayA), b = approx_unit(rayB);
                Rat cr = cross2(a, b);
                if (sgn(cr) > 0)
                    bis = approx_unit(vadd(a, b));
                else if (sgn(cr) < 0)
                    bis = approx_unit(vscale(vadd(a, b), rat(-1)));
                else
                    bis = approx_unit(rot90ccw(a));
            }
            W.fr = Frame{vadd(vpos_[static_cast<std::size_t>(v)],
                              vscale(bis, rbU_[static_cast<std::size_t>(v)] * u_)),
                         rot90ccw(bis), bis, u_};
            // Tiling: every variable wedge of degree >= 2; clause wedges B1/B2.
            if (!W.at_clause) {
                W.tiled = !W.antipode;
            } else {
                int c = v - L_.nvars;
                int s1 = clause_s1_[static_cast<std::size_t>(c)];
                int s2 = ccw_next_edge(v, s1);
                W.tiled = (W.eA == s1 || W.eA == s2);
            }
            if (W.tiled) {
                long T = W.wide ? 20 : 16, H = W.wide ? 20 : 16, h = W.wide ? 6 : 3;
                long bw = T - h;
                W.tile.wn = W.fr.at(-H, h);
                W.tile.en = W.fr.at(H, h);
                W.tile.ws = W.fr.at(-H, -h);
                W.tile.es = W.fr.at(H, -h);
                W.tile.wedgeN = {W.fr.at(0, h), W.fr.at(-bw, T), W.fr.at(bw, T)};
                W.tile.wedgeS = {W.fr.at(0, -h), W.fr.at(-bw, -T), W.fr.at(bw, -T)};
                holes_.push_back(W.tile.wedgeN);
                holes_.push_back(W.tile.wedgeS);
            }
            wedge_by_eA_[{v, W.eA}] = static_cast<int>(wedges_.size());
            wedges_.push_back(std::move(W));
        }
    }
}

// ---------------------------------------------------------------------------
// Inverter stations (one pair per negated street).

inline void Compiler::build_stations() {
    for (std::size_t e = 0; e < L_.edges.size(); ++e) {
        if (!negated_[e]) continue;
        const LaneGeom& ln = lanes_[e];
        // stagger parallel lanes along the street
        Rat stag = rat(0);
        {
            // recover the lane's bundle rank from its tilt direction: reuse
            // lateral order via the port offset along perpL
            // (simpler: stagger by edge id parity-ish, deterministic)
            stag = rat(160) * rat(static_cast<long>(e % 3));
        }
        for (int side = 0; side < 2; ++side) {
            StationInfo st;
            st.edge = static_cast<int>(e);
            st.a_side = (side == 0);
            Rat sU = st.a_side ? Rat(ln.len * rat(2) / rat(3) + stag)
                               : Rat(ln.len / rat(3) + stag);
            Point O = ln.laneF.at(sU, st.a_side ? rat(-56) : rat(56));
            if (st.a_side)
                st.fr = Frame{O, ln.dirL, ln.perpL, u_};
            else
                st.fr = Frame{O, vscale(ln.dirL, rat(-1)), vscale(ln.perpL, rat(-1)), u_};
            long T = 16, H = 16, h = 3, bw = T - h;
            st.tile.wn = st.fr.at(-H, h);
            st.tile.en = st.fr.at(H, h);
            st.tile.ws = st.fr.at(-H, -h);
            st.tile.es = st.fr.at(H, -h);
            st.tile.wedgeN = {st.fr.at(0, h), st.fr.at(-bw, T), st.fr.at(bw, T)};
            st.tile.wedgeS = {st.fr.at(0, -h), st.fr.at(-bw, -T), st.fr.at(bw, -T)};
            holes_.push_back(st.tile.wedgeN);
            holes_.push_back(st.tile.wedgeS);
            station_by_[{static_cast<int>(e), side == 0 ? 1 : 0}] =
                static_cast<int>(stations_.size());
            stations_.push_back(std::move(st));
        }
    }
}

// ---------------------------------------------------------------------------
// Corridor connectors.

inline std::vector<Point> Compiler::w_entry(int vert, int e_in, const WedgeInfo& Z,
                                            long t, const Rat& row) const {
    // From J_in on e_in's port at `vert` (t-flank +), descend to the circle at
    // radius R+row, arc ccw to the wedge approach point at frame x = -(H+18).
    const Frame& pf = port_at(e_in, vert);
    Rat rim = rimU_[static_cast<std::size_t>(vert)];
    Rat R = rbU_[static_cast<std::size_t>(vert)];
    long Hl = Z.wide ? 20 : 16;
    std::vector<Point> out;
    push_pt(out, pf.at(12, 0));  // J_in
    push_pt(out, pf.at(t, 16));
    Point dend = pf.at(rat(t), rim - (R + row));
    push_pt(out, dend);
    Point appr = Z.fr.at(rat(-(Hl + 18)), row);
    for (const Point& p : arc_between(vert, R + row, dend, appr, true)) push_pt(out, p);
    push_pt(out, appr);
    return out;
}

inline std::vector<Point> Compiler::e_exit(int vert, int e_out, const WedgeInfo& Z,
                                           long t, const Rat& row) const {
    // From the wedge exit point at frame x = +(H+22), arc ccw to e_out's port,
    // ascend at the -t flank, end at J_out.
    const Frame& pf = port_at(e_out, vert);
    Rat rim = rimU_[static_cast<std::size_t>(vert)];
    Rat R = rbU_[static_cast<std::size_t>(vert)];
    long Hl = Z.wide ? 20 : 16;
    std::vector<Point> out;
    Point dep = Z.fr.at(rat(Hl + 22), row);
    push_pt(out, dep);
    Point aend = pf.at(rat(-t), rim - (R + row));
    for (const Point& p : arc_between(vert, R + row, dep, aend, true)) push_pt(out, p);
    push_pt(out, aend);
    push_pt(out, pf.at(-t, 16));
    push_pt(out, pf.at(-12, 0));  // J_out
    return out;
}

// ---------------------------------------------------------------------------
// Emission: whole instance.

inline void Compiler::emit_all() {
    street_seen_.assign(L_.edges.size(), 0);
    clause_linkn_.assign(static_cast<std::size_t>(L_.nclauses), 0);
    for (std::size_t k = 0; k < inter_.size(); ++k) {
        emit_interaction(k);
        const Interaction& it = inter_[k];
        if (it.e_out >= 0) {
            const LayoutEdge& le = L_.edges[static_cast<std::size_t>(it.e_out)];
            int other = le.var == it.vert ? le.clause : le.var;
            emit_street(it.e_out, it.vert, other);
        }
    }
}

// Interaction = arrival along e_in + departure along e_out at `vert`.
inline void Compiler::emit_interaction(std::size_t k) {
    Interaction it = inter_[k];
    int v = it.vert;
    if (it.e_in < 0) {
        // start of f: E-half of the closing wedge (pre-created here)
        int e0 = it.e_out;
        int eprev = ccw_prev_edge(v, e0);
        WedgeInfo& Z = wedges_[static_cast<std::size_t>(wedge_of(v, eprev))];
        char slot = Z.antipode ? 'E' : 'E';
        emit_e_half(it, Z, slot);
        return;
    }
    if (it.e_out < 0) {
        int enext = ccw_next_edge(v, it.e_in);
        (void)enext;
        WedgeInfo& Zin = wedges_[static_cast<std::size_t>(
            wedge_of(v, it.e_in))];
        emit_w_half(it, Zin, 'W');
        return;
    }
    WedgeInfo& Zin = wedges_[static_cast<std::size_t>(wedge_of(v, it.e_in))];
    int eprev = ccw_prev_edge(v, it.e_out);
    WedgeInfo& Zout = wedges_[static_cast<std::size_t>(wedge_of(v, eprev))];
    if (&Zin == &Zout) {
        emit_w_half(it, Zin, 'M');
        emit_e_half(it, Zin, 'M');
        return;
    }
    // split passage: W-terminal + deep link + E-terminal
    require(is_clause(v), "split passage outside a clause");
    int c = v - L_.nvars;
    // ccw iff Zout is ccw of Zin in rotation order (the link travels toward
    // the departure street's wedge): through passages sweep ccw, return caps
    // (same-street U-turns) sweep cw.
    bool ccw = !(it.e_in == it.e_out);
    int depth;
    if (ccw) {
        depth = -92;
    } else {
        depth = clause_linkn_[static_cast<std::size_t>(c)] == 0 ? -86 : -80;
    }
    clause_linkn_[static_cast<std::size_t>(c)]++;
    emit_w_half(it, Zin, 'W');
    Zin.dep_depth = depth;
    Zin.dep_east = ccw;
    emit_link(Zin, Zout, ccw, depth, vlabel(v));
    Zout.arr_depth = depth;
    Zout.arr_east = !ccw;
    emit_e_half(it, Zout, 'E');
}

// ---------------------------------------------------------------------------
// W-half: from J_in(e_in) into the wedge slot.  Returns unit index.

inline int Compiler::emit_w_half(const Interaction& it, WedgeInfo& Z, char slot) {
    int v = it.vert;
    int e_in = it.e_in;
    bool clause = is_clause(v);
    int wire = clause ? wire_out_[static_cast<std::size_t>(e_in)]
                      : wire_in_[static_cast<std::size_t>(e_in)];
    bool hasf2 = wires_[static_cast<std::size_t>(wire)].has_f2;
    long T = Z.wide ? 20 : 16, H = Z.wide ? 20 : 16;
    // slot point
    long mx = slot == 'M' ? 0 : -8;
    Rat my = rat(-(T + 24));
    Point M = Z.fr.at(rat(mx), my);
    if (slot == 'M')
        Z.used_mid = true;
    else
        Z.used_W = true;

    std::vector<std::vector<Point>> cors;
    std::vector<Point> piece;
    const Frame& fr = Z.fr;

    if (Z.antipode) {
        // degree-1 variable: plain half-circle bands at R-18 (T) and R-22 (F).
        for (long band : {18, 22}) {
            std::vector<Point> c = w_entry(v, e_in, Z, band == 18 ? 10 : 14,
                                           rat(-band));
            // replace the approach convention: w_entry targeted x=-(H+18);
            // dip from there to the slot
            push_pt(c, fr.at(-12, -band));
            push_pt(c, fr.at(mx == 0 ? -4 : -8, -(T + 12)));
            push_pt(c, M);
            cors.push_back(std::move(c));
        }
        piece = w_entry(v, e_in, Z, 12, rat(-20));
        push_pt(piece, fr.at(-12, -20));
        push_pt(piece, fr.at(mx == 0 ? -2 : -6, -(T + 8)));
        push_pt(piece, M);
        int idx = add_unit("stringing", vlabel(v), wire, std::move(piece), std::move(cors));
        Z.w_unit = idx;
        return idx;
    }

    // corridor T and F (and F2 on clause s2 wedges), roles per tile position
    // thr route: arc at R+(T+4), thread chord wn->es, legs to the slot.
    auto thr_route = [&]() {
        std::vector<Point> c = w_entry(v, e_in, Z, 10, rat(T + 4));
        push_pt(c, Z.tile.wn);
        push_pt(c, Z.tile.es);
        push_pt(c, fr.at(H, -(T + 12)));
        if (slot == 'M') {
            push_pt(c, fr.at(H - 8, -(T + 16)));
        } else {
            push_pt(c, fr.at(4, -(T + 17)));
        }
        push_pt(c, M);
        return c;
    };
    auto byp_route = [&]() {
        std::vector<Point> c = w_entry(v, e_in, Z, 14, rat(-(T + 14)));
        push_pt(c, fr.at(-18, -(T + 14)));
        if (slot == 'M')
            push_pt(c, fr.at(-5, -(T + 19)));
        else
            push_pt(c, fr.at(-12, -(T + 19)));
        push_pt(c, M);
        return c;
    };
    auto byp2_route = [&]() {  // second bypass, deeper row
        std::vector<Point> c = w_entry(v, e_in, Z, 18, rat(-(T + 18)));
        push_pt(c, fr.at(-20, -(T + 18)));
        push_pt(c, fr.at(mx == 0 ? -8 : -12, -(T + 22)));
        push_pt(c, M);
        return c;
    };
    auto band_route = [&](long band, long t) {  // untiled clause wedge (B3)
        std::vector<Point> c = w_entry(v, e_in, Z, t, rat(-band));
        push_pt(c, fr.at(-12, -band));
        push_pt(c, fr.at(mx == 0 ? -4 : -8, -(T + 14)));
        push_pt(c, M);
        return c;
    };

    int thr_mask = 0;  // which option indices thread the tile
    if (!Z.tiled) {
        cors.push_back(band_route(18, 10));
        cors.push_back(band_route(22, 14));
    } else if (!clause) {
        // variable wedge: T threads, F bypasses
        cors.push_back(thr_route());
        cors.push_back(byp_route());
        thr_mask = 1 << 0;
        if (hasf2) cors.push_back(cors[1]);  // F2 behaves like F here
    } else {
        int c = v - L_.nvars;
        int s1 = clause_s1_[static_cast<std::size_t>(c)];
        int s2 = ccw_next_edge(v, s1);
        if (Z.eA == s1) {
            // B1 tile, W side = out(s1): F threads
            cors.push_back(byp_route());
            cors.push_back(thr_route());
            thr_mask = 1 << 1;
            if (hasf2) cors.push_back(byp2_route());
        } else if (Z.eA == s2) {
            // B2 tile, W side = out(s2): F2 threads, T/F bypass
            cors.push_back(byp_route());
            cors.push_back(byp2_route());
            thr_mask = 1 << 2;
            require(hasf2, "s2 outbound wire must carry F2");
            cors.push_back(thr_route());
        } else {
            fail("tiled clause wedge must be B1 or B2");
        }
    }
    // piece: descend at t=+12, arc at R-5, dip to the slot
    piece = w_entry(v, e_in, Z, 12, rat(-5));
    push_pt(piece, fr.at(-14, -5));
    if (slot == 'M')
        push_pt(piece, fr.at(0, -20));
    else
        push_pt(piece, fr.at(-8, -20));
    push_pt(piece, M);
    int idx = add_unit("stringing", vlabel(v), wire, std::move(piece), std::move(cors));
    Z.w_unit = idx;
    if (thr_mask) {
        // remember threading options for conflict emission
        // stored via side table below (wedge keeps unit ids; masks recomputed)
    }
    return idx;
}

// ---------------------------------------------------------------------------
// E-half: from the wedge slot to J_out(e_out).

inline int Compiler::emit_e_half(const Interaction& it, WedgeInfo& Z, char slot) {
    int v = it.vert;
    int e_out = it.e_out;
    bool clause = is_clause(v);
    int wire = clause ? wire_out_[static_cast<std::size_t>(e_out)]
                      : wire_in_[static_cast<std::size_t>(e_out)];
    bool hasf2 = wires_[static_cast<std::size_t>(wire)].has_f2;
    long T = Z.wide ? 20 : 16, H = Z.wide ? 20 : 16;
    bool shared = (slot == 'M');
    long mx = shared ? 0 : 8;
    Rat my = rat(-(T + 24));
    Point M = Z.fr.at(rat(mx), my);
    if (shared)
        Z.used_mid = true;
    else
        Z.used_E = true;
    const Frame& fr = Z.fr;

    std::vector<std::vector<Point>> cors;
    std::vector<Point> piece;

    if (Z.antipode) {
        for (long band : {26, 30}) {
            std::vector<Point> c;
            push_pt(c, M);
            push_pt(c, fr.at(mx + 2, -(T + 12)));
            push_pt(c, fr.at(12, -band));
            std::vector<Point> tail =
                e_exit(v, e_out, Z, band == 26 ? 10 : 14, rat(-band));
            // e_exit starts at frame x=+(H+22); replace with our band exit
            std::vector<Point> c2 = c;
            push_pt(c2, fr.at(H + 22, -band));
            push_all(c2, tail);
            cors.push_back(std::move(c2));
        }
        piece.clear();
        push_pt(piece, M);
        push_pt(piece, fr.at(mx + 2, -(T + 10)));
        push_pt(piece, fr.at(12, -28));
        push_pt(piece, fr.at(H + 22, -28));
        push_all(piece, e_exit(v, e_out, Z, 12, rat(-28)));
        int idx =
            add_unit("stringing", vlabel(v), wire, std::move(piece), std::move(cors));
        Z.e_unit = idx;
        return idx;
    }

    // threading route: rise east of the legs, run under the tile westward,
    // thread the chord ws->en, exit east over the rows.
    auto thr_route = [&]() {
        std::vector<Point> c;
        push_pt(c, M);
        if (shared)
            push_pt(c, fr.at(8, -(T + 28)));
        else
            push_pt(c, fr.at(13, -(T + 28)));
        push_pt(c, fr.at(T + 2 > H ? 18 : 18, -(T + 16)));
        push_pt(c, fr.at(20, -(T + 6)));
        push_pt(c, fr.at(-2, -(T + 6)));
        push_pt(c, fr.at(-(T + 2), -(T + 4)));
        push_pt(c, fr.at(-(H + 4), -12));
        push_pt(c, Z.tile.ws);
        push_pt(c, Z.tile.en);
        push_pt(c, fr.at(H + 8, -6));
        push_pt(c, fr.at(H + 12, -(T + 0)));
        push_pt(c, fr.at(H + 14, -(T + 10)));
        push_all(c, e_exit(v, e_out, Z, 10, rat(-(T + 10))));
        return c;
    };
    auto byp_route = [&]() {
        std::vector<Point> c;
        push_pt(c, M);
        push_pt(c, fr.at(mx + 8, -(T + 28)));
        push_pt(c, fr.at(18, -(T + 18)));
        push_pt(c, fr.at(26, -(T + 14)));
        push_all(c, e_exit(v, e_out, Z, 14, rat(-(T + 14))));
        return c;
    };
    auto byp2_route = [&]() {
        std::vector<Point> c;
        push_pt(c, M);
        push_pt(c, fr.at(mx + 8, -(T + 28)));
        push_pt(c, fr.at(14, -(T + 22)));
        push_pt(c, fr.at(24, -(T + 18)));
        push_all(c, e_exit(v, e_out, Z, 18, rat(-(T + 18))));
        return c;
    };
    auto band_route = [&](long band, long t) {
        std::vector<Point> c;
        push_pt(c, M);
        push_pt(c, fr.at(mx + 4, -(T + 15)));
        push_pt(c, fr.at(12, -band));
        push_pt(c, fr.at(H + 22, -band));
        push_all(c, e_exit(v, e_out, Z, t, rat(-band)));
        return c;
    };

    if (!Z.tiled) {
        cors.push_back(band_route(26, 10));
        cors.push_back(band_route(30, 14));
    } else if (!clause) {
        cors.push_back(byp_route());
        cors.push_back(thr_route());
        if (hasf2) cors.push_back(cors[1]);  // F2 threads identically
    } else {
        int c = v - L_.nvars;
        int s1 = clause_s1_[static_cast<std::size_t>(c)];
        (void)s1;
        // E side of B1 threads F (F2 gets its own bypass); E side of B2 threads F.
        cors.push_back(byp_route());
        cors.push_back(thr_route());
        if (hasf2) cors.push_back(byp2_route());
    }
    // piece
    piece.clear();
    push_pt(piece, M);
    push_pt(piece, fr.at(mx ? 10 : 6, -(T + 18)));
    push_pt(piece, fr.at(-2, -(T + 10)));
    push_pt(piece, fr.at(-4, -12));
    push_pt(piece, fr.at(6, -4));
    push_pt(piece, fr.at(16, -10));
    push_pt(piece, fr.at(24, -20));
    push_pt(piece, fr.at(H + 10, -(T + 11)));
    push_pt(piece, fr.at(H + 22, -(T + 12)));
    push_all(piece, e_exit(v, e_out, Z, 12, rat(-(T + 12))));
    int idx = add_unit("stringing", vlabel(v), wire, std::move(piece), std::move(cors));
    Z.e_unit = idx;
    return idx;
}

// ---------------------------------------------------------------------------
// Deep links between split-passage slots.

inline void Compiler::emit_link(WedgeInfo& A, WedgeInfo& B, bool ccw, int depth,
                                const std::string& label) {
    int v = A.vert;
    Rat R = rbU_[static_cast<std::size_t>(v)];
    long T = 16;  // links only occur at clauses (narrow flavor)
    Rat y = rat(depth);
    Point MA = A.fr.at(-8, -(T + 24));
    Point MB = B.fr.at(8, -(T + 24));
    std::vector<Point> c;
    push_pt(c, MA);
    // dive lane x=-12 beside M_W
    push_pt(c, A.fr.at(-12, -(T + 32)));
    push_pt(c, A.fr.at(rat(-12), y + rat(6)));
    Point dep_end;
    if (ccw) {
        push_pt(c, A.fr.at(rat(-4), y));
        dep_end = A.fr.at(rat(38), y);
        push_pt(c, dep_end);
    } else {
        dep_end = A.fr.at(rat(-18), y);
        push_pt(c, dep_end);
        Point dd = A.fr.at(rat(-38), y);
        push_pt(c, dd);
        dep_end = dd;
    }
    // arc at radius R+depth to the arrival side of B
    Point arr_start = ccw ? B.fr.at(rat(-38), y) : B.fr.at(rat(38), y);
    for (const Point& p : arc_between(v, R + y, dep_end, arr_start, ccw))
        push_pt(c, p);
    push_pt(c, arr_start);
    if (ccw) {
        // arrive from the west: row under the slots, rise in lane x=-4
        push_pt(c, B.fr.at(rat(-8), y));
        push_pt(c, B.fr.at(rat(-4), y + rat(2)));
        push_pt(c, B.fr.at(-4, -(T + 34)));
        push_pt(c, B.fr.at(2, -(T + 29)));
    } else {
        // arrive from the east: diagonal into M_E
        push_pt(c, B.fr.at(rat(24), y));
        push_pt(c, B.fr.at(14, -(T + 32)));
    }
    push_pt(c, MB);
    std::vector<Point> piece = c;
    add_unit("stringing", label, -1, std::move(piece), {std::move(c)});
}

// ---------------------------------------------------------------------------
// Streets (with inverter stations on negated streets, slab-trace loops in
// plane mode).

inline void Compiler::emit_plane_loop(const LaneGeom& ln, bool from_v,
                                      const std::string& label) {
    // Open loop tracing the slab outline, inserted before the street's first
    // traversal.  Starts at that traversal's J_out; ends 2u further along.
    Frame lf = ln.laneF;
    Rat len = ln.len;
    auto L = [&](const Rat& s, const Rat& w) {
        return from_v ? lf.at(s, w) : lf.at(len - s, -w);
    };
    const Frame& pf = from_v ? ln.portVF : ln.portCF;
    std::vector<Point> c;
    push_pt(c, pf.at(-12, 0));  // J_out
    push_pt(c, L(rat(16), rat(-7, 2)));
    push_pt(c, L(len - rat(12), rat(-7, 2)));
    push_pt(c, L(len - rat(8), rat(0)));
    // return leg with four zig strokes near s = len/3
    Rat zs = len / rat(3);
    push_pt(c, L(len - rat(12), rat(7, 2)));
    for (int k = 3; k >= 0; --k) {
        Rat s0 = zs + rat(24) * rat(k);
        push_pt(c, L(s0 + rat(16), rat(7, 2)));
        push_pt(c, L(s0 + rat(8), rat(1, 2)));
        push_pt(c, L(s0, rat(7, 2)));
    }
    push_pt(c, L(rat(12), rat(7, 2)));
    push_pt(c, L(rat(8), rat(0)));
    push_pt(c, L(rat(5), rat(-6)));
    push_pt(c, L(rat(2), rat(-12)));  // J_out'
    std::vector<Point> piece = c;
    add_unit("holecurve", label, -1, std::move(piece), {std::move(c)});
}

inline void Compiler::emit_street(int e, int from, int to) {
    const LaneGeom& ln = lane(e);
    const LayoutEdge& le = L_.edges[static_cast<std::size_t>(e)];
    bool from_v = (from == le.var);
    require((from_v ? le.clause : le.var) == to, "street endpoint mismatch");
    std::string wl = "wire " + std::to_string(e + 1);
    bool first = !street_seen_[static_cast<std::size_t>(e)];
    street_seen_[static_cast<std::size_t>(e)] = 1;
    if (mode_ == GadgetMode::frechet_plane && first) emit_plane_loop(ln, from_v, wl);

    Frame lf = ln.laneF;
    Rat len = ln.len;
    // Strand coordinates: travel parameter a in [0, len] from the departure
    // port, lateral tracks on the strand's own flank.
    auto L = [&](const Rat& a, const Rat& w) {
        return from_v ? lf.at(a, -w) : lf.at(len - a, w);
    };
    const Frame& pfrom = from_v ? ln.portVF : ln.portCF;
    const Frame& pto = from_v ? ln.portCF : ln.portVF;
    Point Jout = pfrom.at(-12, 0);
    Point Jin = pto.at(12, 0);
    bool plane_first = (mode_ == GadgetMode::frechet_plane && first);
    Point start = plane_first ? L(rat(2), rat(12)) : Jout;

    int w_first = from_v ? wire_in_[static_cast<std::size_t>(e)]
                         : wire_out_[static_cast<std::size_t>(e)];
    int w_second = from_v ? wire_out_[static_cast<std::size_t>(e)]
                          : wire_in_[static_cast<std::size_t>(e)];

    auto track_run = [&](std::vector<Point>& c, long w, const Rat& a0, const Rat& a1) {
        push_pt(c, L(a0, rat(w)));
        push_pt(c, L(a1, rat(w)));
    };

    if (!negated_[static_cast<std::size_t>(e)]) {
        // single unit, 2 or 3 corridors
        bool hasf2 = wires_[static_cast<std::size_t>(w_first)].has_f2;
        std::vector<std::vector<Point>> cors;
        for (long w : {8L, 16L, 24L}) {
            if (w == 24 && !hasf2) break;
            std::vector<Point> c;
            push_pt(c, start);
            track_run(c, w, rat(24), len - rat(24));
            push_pt(c, Jin);
            cors.push_back(std::move(c));
        }
        std::vector<Point> piece;
        push_pt(piece, start);
        push_pt(piece, L(rat(24), rat(12)));
        push_pt(piece, L(len - rat(24), rat(12)));
        push_pt(piece, Jin);
        add_unit("signal", wl, w_first, std::move(piece), std::move(cors));
        return;
    }

    // Negated street: two units split at the inverter station on this strand.
    int sidx = station_by_.at({e, from_v ? 1 : 0});
    const StationInfo& st = stations_[static_cast<std::size_t>(sidx)];
    const Frame& sf = st.fr;
    Point M = sf.at(0, -40);
    Rat sa = st.a_side ? Rat(len * rat(2) / rat(3)) : Rat(len / rat(3));
    // the station stagger shifts its frame; recover the strand coordinate of
    // the frame origin from geometry-independent bookkeeping: project.
    {
        Point d = vsub(sf.O, ln.portV);
        Rat s_abs = dot(d, ln.dirL) / norm2(ln.dirL) / u_;
        sa = from_v ? s_abs : Rat(len - s_abs);
    }
    std::string sl = "not " + std::to_string(e + 1);
    bool in_first = from_v;  // v->c strand meets the wire_in templates first
    // unit 1: J_out .. station W-template .. M
    {
        bool thr_is_T = in_first;  // A1 threads on T; B2 threads on F/F2
        bool hasf2 = wires_[static_cast<std::size_t>(w_first)].has_f2;
        std::vector<std::vector<Point>> cors;
        auto approach = [&](long w, std::vector<Point>& c) {
            push_pt(c, start);
            track_run(c, w, rat(24), sa - rat(64));
        };
        auto wthr = [&](long w) {
            std::vector<Point> c;
            approach(w, c);
            push_pt(c, sf.at(-58, 56 - w == 48 ? 44 : 44));
            push_pt(c, sf.at(-44, 30));
            push_pt(c, sf.at(-34, 20));
            push_pt(c, st.tile.wn);
            push_pt(c, st.tile.es);
            push_pt(c, sf.at(16, -28));
            push_pt(c, sf.at(8, -32));
            push_pt(c, M);
            return c;
        };
        auto wbyp = [&](long w) {
            std::vector<Point> c;
            approach(w, c);
            push_pt(c, sf.at(-56, 56 - static_cast<long>(w)));
            push_pt(c, sf.at(-44, -10));
            push_pt(c, sf.at(-34, -30));
            push_pt(c, sf.at(-18, -30));
            push_pt(c, sf.at(-5, -35));
            push_pt(c, M);
            return c;
        };
        if (thr_is_T) {
            cors.push_back(wthr(8));
            cors.push_back(wbyp(16));
            require(!hasf2, "inbound wires carry no F2");
        } else {
            cors.push_back(wbyp(8));
            cors.push_back(wthr(16));
            if (hasf2) cors.push_back(wthr(24));
        }
        std::vector<Point> piece;
        push_pt(piece, start);
        push_pt(piece, L(rat(24), rat(12)));
        push_pt(piece, L(sa - rat(64), rat(12)));
        push_pt(piece, sf.at(-44, 20));
        push_pt(piece, sf.at(-34, 0));
        push_pt(piece, sf.at(-18, -16));
        push_pt(piece, sf.at(6, -16));
        push_pt(piece, M);
        int idx = add_unit("signal", sl, w_first, std::move(piece), std::move(cors));
        stations_[static_cast<std::size_t>(sidx)].w_unit = idx;
    }
    // unit 2: M .. station E-template .. J_in
    {
        bool thr_is_T = in_first;  // A2 threads on T; B1 threads on F
        bool hasf2 = wires_[static_cast<std::size_t>(w_second)].has_f2;
        std::vector<std::vector<Point>> cors;
        auto depart = [&](long w, std::vector<Point>& c) {
            track_run(c, w, sa + rat(64), len - rat(24));
            push_pt(c, Jin);
        };
        auto ethr = [&](long w) {
            std::vector<Point> c;
            push_pt(c, M);
            push_pt(c, sf.at(8, -44));
            push_pt(c, sf.at(18, -32));
            push_pt(c, sf.at(20, -22));
            push_pt(c, sf.at(-2, -22));
            push_pt(c, sf.at(-18, -20));
            push_pt(c, sf.at(-20, -12));
            push_pt(c, st.tile.ws);
            push_pt(c, st.tile.en);
            push_pt(c, sf.at(24, -6));
            push_pt(c, sf.at(28, -16));
            push_pt(c, sf.at(30, -26));
            push_pt(c, sf.at(38, -26));
            push_pt(c, sf.at(46, -10));
            push_pt(c, sf.at(54, 30));
            push_pt(c, sf.at(58, 56 - static_cast<long>(w)));
            depart(w, c);
            return c;
        };
        auto ebyp = [&](long w, long row) {
            std::vector<Point> c;
            push_pt(c, M);
            push_pt(c, sf.at(8, -44));
            push_pt(c, sf.at(row == 30 ? 16 : 14, -(row + 4)));
            push_pt(c, sf.at(26, -row));
            push_pt(c, sf.at(38, -row));
            push_pt(c, sf.at(46, -10));
            push_pt(c, sf.at(55, 28));
            push_pt(c, sf.at(58, 56 - static_cast<long>(w)));
            depart(w, c);
            return c;
        };
        if (thr_is_T) {
            cors.push_back(ethr(8));
            cors.push_back(ebyp(16, 30));
            if (hasf2) cors.push_back(ebyp(24, 34));
        } else {
            cors.push_back(ebyp(8, 30));
            cors.push_back(ethr(16));
            require(!hasf2, "inbound wires carry no F2");
        }
        std::vector<Point> piece;
        push_pt(piece, M);
        push_pt(piece, sf.at(6, -34));
        push_pt(piece, sf.at(-2, -26));
        push_pt(piece, sf.at(-4, -12));
        push_pt(piece, sf.at(6, -4));
        push_pt(piece, sf.at(16, -10));
        push_pt(piece, sf.at(24, -20));
        push_pt(piece, sf.at(30, -27));
        push_pt(piece, sf.at(39, -24));
        push_pt(piece, sf.at(47, -8));
        push_pt(piece, sf.at(56, 32));
        push_pt(piece, L(sa + rat(64), rat(12)));
        push_pt(piece, L(len - rat(24), rat(12)));
        push_pt(piece, Jin);
        int idx = add_unit("signal", sl, w_second, std::move(piece), std::move(cors));
        stations_[static_cast<std::size_t>(sidx)].e_unit = idx;
    }
}

// ---------------------------------------------------------------------------
// Designed conflicts.

inline void Compiler::emit_conflicts() {
    auto cross_all = [&](int ua, std::vector<int> oa, int ub, std::vector<int> ob) {
        for (int a : oa)
            for (int b : ob) conflicts_.push_back({ua, a, ub, b});
    };
    for (const WedgeInfo& Z : wedges_) {
        if (!Z.tiled || Z.w_unit < 0 || Z.e_unit < 0) continue;
        const GadgetUnit& eu = units_[static_cast<std::size_t>(Z.e_unit)];
        bool e3 = eu.corridors.size() == 3;
        if (!Z.at_clause) {
            std::vector<int> eopts = {1};
            if (e3) eopts.push_back(2);
            cross_all(Z.w_unit, {0}, Z.e_unit, eopts);
        } else {
            int c = Z.vert - L_.nvars;
            int s1 = clause_s1_[static_cast<std::size_t>(c)];
            if (Z.eA == s1)
                cross_all(Z.w_unit, {1}, Z.e_unit, {1});
            else
                cross_all(Z.w_unit, {2}, Z.e_unit, {1});
        }
    }
    for (const StationInfo& st : stations_) {
        require(st.w_unit >= 0 && st.e_unit >= 0, "station without strand");
        if (st.a_side) {
            conflicts_.push_back({st.w_unit, 0, st.e_unit, 0});
        } else {
            conflicts_.push_back({st.w_unit, 1, st.e_unit, 1});
            const GadgetUnit& wu = units_[static_cast<std::size_t>(st.w_unit)];
            if (wu.corridors.size() == 3)
                conflicts_.push_back({st.w_unit, 2, st.e_unit, 1});
        }
    }
}

// ---------------------------------------------------------------------------
// Surfaces.

// Trapezoid-strip triangulation of a padded bounding rectangle minus hole
// polygons.  Exact arithmetic; cracks between strips are fine for TriSurface.
inline void strip_mesh(const Point& lo, const Point& hi,
                       const std::vector<std::vector<Point>>& holes, bool lift3d,
                       std::vector<Point>& verts, std::vector<std::array<int, 3>>& tris,
                       const std::function<Rat(const Point&)>& height) {
    std::vector<Rat> xs = {lo.x, hi.x};
    for (const auto& h : holes)
        for (const auto& p : h) {
            if (p.x > lo.x && p.x < hi.x) xs.push_back(p.x);
        }
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    struct Edge {
        Rat x0, y0, x1, y1;  // x0 < x1
    };
    std::vector<Edge> edges;
    for (const auto& h : holes) {
        std::size_t n = h.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = h[i];
            const Point& b = h[(i + 1) % n];
            if (a.x == b.x) continue;  // vertical edges do not bound trapezoids
            if (a.x < b.x)
                edges.push_back({a.x, a.y, b.x, b.y});
            else
                edges.push_back({b.x, b.y, a.x, a.y});
        }
    }
    auto inside_any = [&](const Point& q) {
        for (const auto& h : holes) {
            bool in = false;
            std::size_t n = h.size();
            for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
                const Point& a = h[i];
                const Point& b = h[j];
                if ((a.y > q.y) != (b.y > q.y)) {
                    Rat xint = a.x + (b.x - a.x) * (q.y - a.y) / (b.y - a.y);
                    if (q.x < xint) in = !in;
                }
            }
            if (in) return true;
        }
        return false;
    };
    std::map<std::pair<std::string, std::string>, int> vindex;
    auto vid = [&](const Rat& x, const Rat& y) {
        auto key = std::make_pair(rat_str(x), rat_str(y));
        auto itped = vindex.find(key);
        if (itped != vindex.end()) return itped->second;
        Point p = pt(x, y);
        Point q = lift3d ? pt3(x, y, height(p)) : p;
        verts.push_back(q);
        int id = static_cast<int>(verts.size()) - 1;
        vindex[key] = id;
        return id;
    };
    for (std::size_t si = 0; si + 1 < xs.size(); ++si) {
        Rat xa = xs[si], xb = xs[si + 1];
        Rat xm = (xa + xb) / rat(2);
        struct Span {
            Rat ya, yb, ym;
        };
        std::vector<Span> spans;
        spans.push_back({lo.y, lo.y, lo.y});  // bottom boundary
        for (const auto& e : edges) {
            if (e.x0 <= xa && e.x1 >= xb) {
                Rat t0 = (xa - e.x0) / (e.x1 - e.x0);
                Rat t1 = (xb - e.x0) / (e.x1 - e.x0);
                Rat tm = (xm - e.x0) / (e.x1 - e.x0);
                spans.push_back({e.y0 + (e.y1 - e.y0) * t0, e.y0 + (e.y1 - e.y0) * t1,
                                 e.y0 + (e.y1 - e.y0) * tm});
            }
        }
        spans.push_back({hi.y, hi.y, hi.y});
        std::sort(spans.begin(), spans.end(),
                  [](const Span& a, const Span& b) { return a.ym < b.ym; });
        for (std::size_t k = 0; k + 1 < spans.size(); ++k) {
            const Span& sa = spans[k];
            const Span& sb = spans[k + 1];
            Rat ymid = (sa.ym + sb.ym) / rat(2);
            if (sa.ym == sb.ym) continue;
            if (inside_any(pt(xm, ymid))) continue;
            int a0 = vid(xa, sa.ya), b0 = vid(xb, sa.yb);
            int b1 = vid(xb, sb.yb), a1 = vid(xa, sb.ya);
            // ccw: (a0,b0,b1) and (a0,b1,a1); skip degenerate tips
            if (!(sa.ya == sb.ya && a0 == a1) && b0 != b1 && a0 != b0) {
                if (a0 != b1 && b0 != b1) tris.push_back({a0, b0, b1});
                if (a0 != a1 && a1 != b1 && a0 != b1) tris.push_back({a0, b1, a1});
            } else if (a0 == a1 && b0 != b1) {
                tris.push_back({a0, b0, b1});
            } else if (b0 == b1 && a0 != a1) {
                tris.push_back({a0, b0, a1});
            }
        }
    }
}

inline void Compiler::build_surface(GadgetInstance& inst) {
    // bounding box over everything emitted
    require(!units_.empty(), "no units");
    Rat xlo = units_[0].piece[0].x, xhi = xlo, ylo = units_[0].piece[0].y, yhi = ylo;
    auto upd = [&](const Point& p) {
        if (p.x < xlo) xlo = p.x;
        if (p.x > xhi) xhi = p.x;
        if (p.y < ylo) ylo = p.y;
        if (p.y > yhi) yhi = p.y;
    };
    for (const auto& un : units_) {
        for (const auto& p : un.piece) upd(p);
        for (const auto& c : un.corridors)
            for (const auto& p : c) upd(p);
    }
    for (const auto& h : holes_)
        for (const auto& p : h) upd(p);
    Rat pad = rat(2) * eps_;
    Point lo = pt(xlo - pad, ylo - pad), hi = pt(xhi + pad, yhi + pad);

    // slab holes along each street
    std::vector<std::vector<Point>> slabs;
    for (const auto& ln : lanes_) {
        std::vector<Point> s = {ln.laneF.at(rat(8), rat(-1)),
                                ln.laneF.at(ln.len - rat(8), rat(-1)),
                                ln.laneF.at(ln.len - rat(8), rat(1)),
                                ln.laneF.at(rat(8), rat(1))};
        slabs.push_back(std::move(s));
    }

    std::vector<Point> verts;
    std::vector<std::array<int, 3>> tris;
    if (mode_ == GadgetMode::frechet_plane) {
        verts = {lo, pt(hi.x, lo.y), hi, pt(lo.x, hi.y)};
        tris = {{0, 1, 2}, {0, 2, 3}};
        inst.surface = make_surface(verts, tris, SurfaceKind::plane_patch);
        inst.holes.clear();
        return;
    }
    std::vector<std::vector<Point>> all_holes = holes_;
    for (auto& s : slabs) all_holes.push_back(s);
    if (mode_ == GadgetMode::frechet_holes) {
        strip_mesh(lo, hi, all_holes, false, verts, tris, {});
        inst.surface = make_surface(verts, tris, SurfaceKind::plane_with_holes);
        inst.holes = all_holes;
        return;
    }
    // terrain: flat z=0 outside footprints; footprints become trenches
    Rat depth_n = params_depth(true), depth_w = params_depth(false);
    (void)depth_n;
    (void)depth_w;
    strip_mesh(lo, hi, all_holes, true, verts, tris,
               [](const Point&) { return rat(0); });
    // add walls + floors per footprint
    std::map<std::pair<std::string, std::string>, int> vidx;
    for (std::size_t i = 0; i < verts.size(); ++i)
        vidx[{rat_str(verts[i].x), rat_str(verts[i].y)}] = static_cast<int>(i);
    auto vid3 = [&](const Rat& x, const Rat& y, const Rat& z) {
        // floor/wall interior vertices are unique; rim vertices reuse z=0 ids
        if (sgn(z) == 0) {
            auto f = vidx.find({rat_str(x), rat_str(y)});
            if (f != vidx.end()) return f->second;
        }
        verts.push_back(pt3(x, y, z));
        return static_cast<int>(verts.size()) - 1;
    };
    std::size_t hole_i = 0;
    for (const auto& h : all_holes) {
        bool is_slab = hole_i >= holes_.size();
        bool narrow_tile = false;
        if (!is_slab) {
            // tiles pushed in pairs; recover flavor by vertex count==3 and size
            narrow_tile = true;  // refined below via area comparison
            Rat area2(0);
            std::size_t n = h.size();
            for (std::size_t i = 0; i < n; ++i)
                area2 = area2 + cross2(h[i], h[(i + 1) % n]);
            if (sgn(area2) < 0) area2 = -area2;
            // wide wedge area2 = 2*(bw*T)*u^2-ish; compare against threshold
            Rat thr = rat(300) * u_ * u_;
            narrow_tile = area2 < thr;
        }
        ++hole_i;
        Rat depth = is_slab ? params_.valley_depth
                            : (narrow_tile ? params_.clause_depth : params_.valley_depth);
        // centroid
        Rat cx(0), cy(0);
        for (const auto& p : h) {
            cx = cx + p.x;
            cy = cy + p.y;
        }
        cx = cx / rat(static_cast<long>(h.size()));
        cy = cy / rat(static_cast<long>(h.size()));
        std::size_t n = h.size();
        std::vector<int> outer, inner;
        for (const auto& p : h) {
            outer.push_back(vid3(p.x, p.y, rat(0)));
            Rat ix = cx + (p.x - cx) * rat(15, 16);
            Rat iy = cy + (p.y - cy) * rat(15, 16);
            inner.push_back(vid3(ix, iy, -depth));
        }
        // orientation: ensure ccw outer ring in xy
        Rat area2(0);
        for (std::size_t i = 0; i < n; ++i) area2 = area2 + cross2(h[i], h[(i + 1) % n]);
        bool ccw = sgn(area2) > 0;
        auto emit = [&](int a, int b, int c) {
            if (ccw)
                tris.push_back({a, b, c});
            else
                tris.push_back({a, c, b});
        };
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = (i + 1) % n;
            emit(outer[i], outer[j], inner[j]);
            emit(outer[i], inner[j], inner[i]);
        }
        int c0 = vid3(cx, cy, -depth);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t j = (i + 1) % n;
            emit(inner[i], inner[j], c0);
        }
    }
    inst.surface = make_surface(verts, tris, SurfaceKind::terrain);
    inst.holes = all_holes;
}

// helper kept separate so build_surface stays readable
inline Rat Compiler_params_depth_unused() { return rat(0); }

// ---------------------------------------------------------------------------
// Final assembly.

inline void Compiler::finish(GadgetInstance& inst) {
    inst.formula = F_;
    inst.normalized = Fn_;
    inst.flipped = flipped_;
    inst.layout = L_;
    inst.order = order_;
    inst.mode = mode_;
    inst.eps = eps_;
    inst.wires = wires_;
    inst.conflicts = conflicts_;

    bool lift = (mode_ == GadgetMode::weak_terrain);
    std::vector<Point> fv;
    for (auto& un : units_) {
        if (lift) {
            for (auto& p : un.piece) p = pt3(p.x, p.y, rat(0));
            for (auto& c : un.corridors)
                for (auto& p : c) p = pt3(p.x, p.y, rat(0));
        }
        if (fv.empty()) {
            fv = un.piece;
        } else {
            require(fv.back().x == un.piece.front().x &&
                        fv.back().y == un.piece.front().y,
                    "units do not chain");
            for (std::size_t i = 1; i < un.piece.size(); ++i) fv.push_back(un.piece[i]);
        }
    }
    inst.f = make_curve(fv);
    inst.units = units_;
    build_surface(inst);
}

inline GadgetInstance Compiler::run() {
    require(F_.nvars >= 1 && !F_.clauses.empty(), "need a nonempty formula");
    normalize();
    build_walk();
    // clause discovery streets are needed by make_wires
    make_wires();
    build_geometry();
    build_wedges();
    build_stations();
    emit_all();
    emit_conflicts();
    GadgetInstance inst;
    finish(inst);
    // unit index ranges into f
    return inst;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Records (serializable annotations).

inline std::vector<UnitRecord> GadgetInstance::records() const {
    std::vector<UnitRecord> out;
    int lo = 0;
    for (std::size_t i = 0; i < units.size(); ++i) {
        const GadgetUnit& un = units[i];
        UnitRecord r;
        r.id = static_cast<int>(i);
        r.kind = un.kind;
        r.gadget = un.gadget;
        r.wire = un.wire;
        r.lo = i == 0 ? 0 : lo;
        r.hi = r.lo + static_cast<int>(un.piece.size());
        lo = r.hi - 1;
        r.corridorT = un.corridors.size() > 0 ? un.corridors[0] : std::vector<Point>{};
        if (un.corridors.size() > 1) r.corridorF = un.corridors[1];
        if (un.corridors.size() > 2) r.corridorF2 = un.corridors[2];
        out.push_back(std::move(r));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Entry points.

inline GadgetInstance compile(const Formula3CNF& F, GadgetMode mode, const Rat& eps) {
    require(sgn(eps) > 0, "eps must be positive");
    GadgetParams p;
    p.eps = eps;
    // calibrate the isolated crossing gadget once per mode (cached)
    static std::map<int, bool> cal_cache;
    int key = static_cast<int>(mode);
    auto itc = cal_cache.find(key);
    if (itc == cal_cache.end()) {
        GadgetParams cp;
        cp.eps = rat(32);
        BaseCalibration cb = calibrate_base(cp, mode, false);
        BaseCalibration cn = calibrate_base(cp, mode, true);
        bool ok = cb.ok() && cn.ok();
        cal_cache[key] = ok;
        itc = cal_cache.find(key);
    }
    require(itc->second, "base gadget calibration failed for this mode");
    detail::Compiler comp(F, mode, eps);
    return comp.run();
}

inline void save_instance(const GadgetInstance& inst, const std::string& dir) {
    write_file(dir + "/curve.crv", serialize_curve(inst.f));
    write_file(dir + "/surface.off", serialize_off(inst.surface));
    write_file(dir + "/meta.txt", serialize_meta(inst.meta()));
    write_file(dir + "/formula.cnf", serialize_dimacs(inst.formula));
    write_file(dir + "/annotations.txt", serialize_annotations(inst.records()));
}

struct LoadedInstance {
    InstanceMeta meta;
    PolyCurve f;
    TriSurface surface;
    std::vector<UnitRecord> units;
};

inline LoadedInstance load_instance(const std::string& dir) {
    LoadedInstance li;
    li.meta = parse_meta_text(read_file(dir + "/meta.txt"), dir + "/meta.txt");
    li.f = parse_curve_file(dir + "/curve.crv");
    li.surface = parse_off_file(dir + "/surface.off");
    li.units = parse_annotations_text(read_file(dir + "/annotations.txt"),
                                      li.f.dim(), dir + "/annotations.txt");
    return li;
}

}  // namespace curvembed
