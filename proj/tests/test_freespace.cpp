#include <catch2/catch_amalgamated.hpp>
#include <curvembed/freespace.hpp>

#include <random>

using namespace curvembed;

namespace {

TriSurface two_tri_square() {
    return make_surface(2, SurfaceKind::plane_patch,
                        {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)},
                        {{0, 1, 2}, {0, 2, 3}});
}

}  // namespace

TEST_CASE("face region: parallel unit segments") {
    Segment fseg(pt(0, 0), pt(1, 0)), edge(pt(0, 1), pt(1, 1));
    // eps = 1: the region degenerates to the diagonal {s = u}
    FaceRegion r1 = face_region(fseg, edge, tol_of_value(rat(1)));
    REQUIRE(!r1.empty());
    CHECK(r1.s.lo == Quad(rat(0)));
    CHECK(r1.s.hi == Quad(rat(1)));
    CHECK(r1.u.lo == Quad(rat(0)));
    CHECK(r1.u.hi == Quad(rat(1)));
    CHECK(face_region_contains(fseg, edge, tol_of_value(rat(1)), rat(1, 2), rat(1, 2)));
    CHECK(!face_region_contains(fseg, edge, tol_of_value(rat(1)), rat(1, 2), rat(1, 4)));
    // eps = 1/2: empty
    CHECK(face_region(fseg, edge, tol_of_value(rat(1, 2))).empty());
    // eps = sqrt(2): the full unit square
    Tol s2 = tol_of_square(rat(2));
    FaceRegion r2 = face_region(fseg, edge, s2);
    CHECK(!r2.empty());
    CHECK(face_region_contains(fseg, edge, s2, rat(0), rat(1)));
    CHECK(face_region_contains(fseg, edge, s2, rat(1), rat(0)));
}

TEST_CASE("edge-face s-interval combines endpoint and line pieces") {
    Segment fseg(pt(0, 0), pt(10, 0));
    // horizontal edge at distance exactly eps: only feet under the edge qualify
    Interval1 h = edge_face_s_interval(fseg, Segment(pt(4, 1), pt(6, 1)), tol_of_value(rat(1)));
    REQUIRE(!h.empty);
    CHECK(h.lo == Quad(rat(2, 5)));
    CHECK(h.hi == Quad(rat(3, 5)));
    // perpendicular edge: endpoint piece dominates
    Interval1 v = edge_face_s_interval(fseg, Segment(pt(5, 0), pt(5, 3)), tol_of_value(rat(1)));
    REQUIRE(!v.empty);
    CHECK(v.lo == Quad(rat(2, 5)));
    CHECK(v.hi == Quad(rat(3, 5)));
    // diagonal curve segment against an edge it can only reach at one corner:
    // the upper endpoint is 1/(2 sqrt 2), irrational
    Interval1 d = edge_face_s_interval(Segment(pt(0, 0), pt(2, 2)), Segment(pt(0, 0), pt(-1, 0)),
                                       tol_of_value(rat(1)));
    REQUIRE(!d.empty);
    CHECK(d.lo == Quad(rat(0)));
    CHECK(d.hi == quad_scale(rat(1, 4), quad_sqrt(rat(2))));
    // region grows with eps
    Interval1 big = edge_face_s_interval(Segment(pt(0, 0), pt(2, 2)), Segment(pt(0, 0), pt(-1, 0)),
                                         tol_of_value(rat(2)));
    CHECK(quad_cmp(big.hi, d.hi) > 0);
}

TEST_CASE("face region monotone in eps") {
    std::mt19937_64 rng(31);
    auto rnd = [&]() -> Rat { return rat(static_cast<long>(rng() % 13) - 6, 2); };
    for (int it = 0; it < 80; ++it) {
        Point a(rnd(), rnd()), b(rnd(), rnd()), c(rnd(), rnd()), d(rnd(), rnd());
        if (a == b || c == d) continue;
        Segment s1(a, b), s2(c, d);
        Rat e1 = rat_abs(rnd()), e2 = e1 + 1;
        Interval1 i1 = edge_face_s_interval(s1, s2, tol_of_value(e1));
        Interval1 i2 = edge_face_s_interval(s1, s2, tol_of_value(e2));
        if (!i1.empty) {
            REQUIRE(!i2.empty);
            CHECK(quad_cmp(i2.lo, i1.lo) <= 0);
            CHECK(quad_cmp(i1.hi, i2.hi) <= 0);
        }
    }
}

TEST_CASE("complex on two triangles") {
    TriSurface S = two_tri_square();
    PolyCurve f = make_curve({Point(rat(1, 4), rat(1, 4)), Point(rat(3, 4), rat(3, 4))});
    FreeComplex C = build_complex(f, S, tol_of_value(rat(10)));
    REQUIRE(C.layers.size() == 1);
    REQUIRE(C.slices.size() == 2);
    CHECK(C.layers[0].cell_free == std::vector<char>{1, 1});
    // the one interior edge carries a full face region
    int inner = -1;
    for (std::size_t e = 0; e < S.edges.size(); ++e)
        if (S.edges[e].t1 != -1) inner = static_cast<int>(e);
    REQUIRE(inner >= 0);
    CHECK(!C.layers[0].eface[inner].empty);
    CHECK(C.layers[0].eface[inner].lo == Quad(rat(0)));
    CHECK(C.layers[0].eface[inner].hi == Quad(rat(1)));
    CHECK(C.slices[0].vface == std::vector<char>{1, 1});
    CHECK(C.slices[1].vface == std::vector<char>{1, 1});
    std::string dump = dump_complex(C);
    CHECK(dump.find("cell 0 0 free") != std::string::npos);
    CHECK(dump.find("edgeface 0 " + std::to_string(inner)) != std::string::npos);
    CHECK(dump.find("vertexface 1 0 free") != std::string::npos);
}

TEST_CASE("complex with eps 0 and disjoint curve") {
    TriSurface S = two_tri_square();
    PolyCurve f = make_curve({pt(5, 5), pt(6, 5)});
    FreeComplex C = build_complex(f, S, tol_of_value(rat(0)));
    CHECK(C.layers[0].cell_free == std::vector<char>{0, 0});
    for (const auto& e : C.layers[0].eface) CHECK(e.empty);
    CHECK(C.slices[0].vface == std::vector<char>{0, 0});
    CHECK(C.stats.cells_considered == 2);
}

TEST_CASE("cell region is convex: straight monotone chords stay free") {
    TriSurface S = two_tri_square();
    std::mt19937_64 rng(41);
    auto rnd_rat = [&](long lo, long hi) -> Rat {
        long num = lo * 100 + static_cast<long>(rng() % ((hi - lo) * 100 + 1));
        return rat(num, 100);
    };
    Tol eps = tol_of_value(rat(1, 2));
    PolyCurve f = make_curve({Point(rat(-1, 4), rat(1, 4)), Point(rat(5, 4), rat(3, 4))});
    Segment seg = f.seg(0);
    Triangle tri = S.triangle(0);
    int found = 0;
    for (int it = 0; it < 4000 && found < 60; ++it) {
        Rat s0 = rnd_rat(0, 1), s1 = rnd_rat(0, 1);
        if (s0 > s1) std::swap(s0, s1);
        Rat a0 = rnd_rat(0, 1), b0 = rnd_rat(0, 1);
        if (a0 + b0 > 1) continue;
        Rat a1 = rnd_rat(0, 1), b1 = rnd_rat(0, 1);
        if (a1 + b1 > 1) continue;
        auto at = [&](const Rat& al, const Rat& be) {
            return vadd(tri.a, vadd(vscale(al, vsub(tri.b, tri.a)), vscale(be, vsub(tri.c, tri.a))));
        };
        Point q0 = at(a0, b0), q1 = at(a1, b1);
        if (dist2(seg.eval(s0), q0) > eps.sq || dist2(seg.eval(s1), q1) > eps.sq) continue;
        ++found;
        for (long k = 1; k < 4; ++k) {
            Rat t = rat(k, 4);
            Rat sm = s0 + t * (s1 - s0);
            Point qm = lerp(q0, q1, t);
            CHECK(dist2(seg.eval(sm), qm) <= eps.sq);
        }
    }
    CHECK(found > 0);
}

TEST_CASE("complex guards") {
    TriSurface S = two_tri_square();
    PolyCurve f = make_curve({pt(0, 0), pt(1, 0), pt(1, 1)});
    CHECK_THROWS_AS(build_complex(f, S, tol_of_value(rat(1)), 3), Error);  // 4 cells > cap 3
    PolyCurve f3 = make_curve({pt3(0, 0, 0), pt3(1, 0, 0)});
    CHECK_THROWS_AS(build_complex(f3, S, tol_of_value(rat(1))), Error);  // dim mismatch
}

TEST_CASE("vertex portals open where the curve passes a mesh vertex") {
    // two triangles sharing only vertex (0,0): a pinch point
    TriSurface S = make_surface(2, SurfaceKind::plane_with_holes,
                                {pt(0, 0), pt(-2, 1), pt(-2, -1), pt(2, 1), pt(2, -1)},
                                {{0, 1, 2}, {0, 4, 3}});
    CHECK(S.edges.size() == 6);
    for (const auto& e : S.edges) CHECK(e.t1 == -1);  // no shared edges at all
    PolyCurve f = make_curve({pt(-1, 0), pt(1, 0)});
    Stats st;
    LayerFaces L = build_layer(f, 0, S, tol_of_value(rat(1, 2)), st);
    CHECK(L.cell_free == std::vector<char>{1, 1});
    REQUIRE(!L.vportal[0].empty);  // portal through the pinch vertex
    CHECK(interval_contains(L.vportal[0], Quad(rat(1, 2))));
    CHECK(!interval_contains(L.vportal[0], Quad(rat(0))));
    for (std::size_t w = 1; w < S.verts.size(); ++w) CHECK(L.vportal[w].empty);
}
