#include <catch2/catch_amalgamated.hpp>

#include "curvembed/gadgets.hpp"

using namespace curvembed;

TEST_CASE("default parameters derive from the tolerance and validate") {
    GadgetParams p = make_params(rat(32));
    REQUIRE(p.u == rat(1));
    REQUIRE(p.lane == rat(8));
    REQUIRE(p.hole_slab_w == rat(2));
    REQUIRE(p.corridor_w == rat(16));
    REQUIRE(p.clause_corridor_w == rat(8));
    REQUIRE(p.valley_w == rat(4));
    REQUIRE(p.valley_depth == rat(128));
    REQUIRE(p.clause_depth == rat(256));
    REQUIRE_NOTHROW(validate_params(p));

    GadgetParams bad = p;
    bad.clause_corridor_w = p.corridor_w;  // must be strictly narrower
    REQUIRE_THROWS_AS(validate_params(bad), Error);
    bad = p;
    bad.valley_w = rat(8);  // trench clearance cap is eps/4
    REQUIRE_THROWS_AS(validate_params(bad), Error);
    bad = p;
    bad.valley_depth = rat(60);  // must exceed 2*eps
    REQUIRE_THROWS_AS(validate_params(bad), Error);
}

TEST_CASE("hole-mode gadget has two wedge barriers and crossing signal curves") {
    GadgetParams p = make_params(rat(32));
    BaseGadget b = build_base(p, GadgetMode::frechet_holes, pt(0, 0));
    REQUIRE(b.holes.size() == 2);
    REQUIRE(b.barrier_curves.empty());
    REQUIRE(b.a1.v.size() == 2);
    REQUIRE(b.a2.v.size() == 2);
    // Signal templates run diagonally and cross at the center.
    REQUIRE(b.a1.v[0] == pt(-48, 48));
    REQUIRE(b.a1.v[1] == pt(48, -48));
    REQUIRE(b.a2.v[0] == pt(-48, -48));
    REQUIRE(b.a2.v[1] == pt(48, 48));
    REQUIRE(sgn(segment_segment_dist2(b.a1.seg(0), b.a2.seg(0))) == 0);
    // Each signal template clears both barriers.
    for (const Triangle& w : b.holes) {
        REQUIRE_FALSE(detail::segment_hits_triangle(b.a1.seg(0), w));
        REQUIRE_FALSE(detail::segment_hits_triangle(b.a2.seg(0), w));
    }
    // Pose translates everything.
    BaseGadget bp = build_base(p, GadgetMode::frechet_holes, pt(100, -7));
    REQUIRE(bp.a1.v[0] == pt(100 - 48, -7 + 48));
    REQUIRE(bp.holes[0].a == pt(100, -7 + 12));
}

TEST_CASE("plane-mode gadget replaces barriers with pinned zigzag loops") {
    GadgetParams p = make_params(rat(32));
    BaseGadget b = build_base(p, GadgetMode::frechet_plane, pt(0, 0));
    REQUIRE(b.barrier_curves.size() == 2);
    for (const PolyCurve& c : b.barrier_curves) {
        REQUIRE(c.closed());
        REQUIRE(c.v.size() >= 10);
    }
    // The north loop dips zig_len/4 deep into its wedge, and the added
    // vertical stroke length totals zig_len.
    const PolyCurve& north = b.barrier_curves[0];
    Rat ytop = rat(80), dip = ytop - p.zig_len / rat(4);
    Rat vertical = rat(0);
    int dips = 0;
    for (int i = 0; i + 1 < static_cast<int>(north.v.size()); ++i) {
        const Point& a = north.v[i];
        const Point& bb = north.v[i + 1];
        if (a.x == bb.x && (a.y == ytop || a.y == dip) && (bb.y == ytop || bb.y == dip)) {
            vertical += abs(bb.y - a.y);
            ++dips;
        }
    }
    REQUIRE(dips == 4);
    REQUIRE(vertical == p.zig_len);
}

TEST_CASE("terrain-mode gadget sinks trenches and lifts curves to 3D") {
    GadgetParams p = make_params(rat(32));
    BaseGadget b = build_base(p, GadgetMode::weak_terrain, pt(0, 0));
    REQUIRE(b.a1.dim() == 3);
    REQUIRE(b.a2.dim() == 3);
    REQUIRE(sgn(b.a1.v[0].z) == 0);
    REQUIRE(b.trench_depth == p.valley_depth);
    BaseGadget narrow = build_base(p, GadgetMode::weak_terrain, pt(0, 0), true);
    REQUIRE(narrow.trench_depth == p.clause_depth);
    // Height probe: deep on the trench floor, zero outside.
    Rat z_floor = detail::trench_height(pt(0, 50), b.holes, b.trench_depth);
    REQUIRE(z_floor == -p.valley_depth);
    Rat z_out = detail::trench_height(pt(0, 0), b.holes, b.trench_depth);
    REQUIRE(sgn(z_out) == 0);
}

TEST_CASE("calibration certifies the default gadget in all three modes") {
    GadgetParams p = make_params(rat(32));
    for (GadgetMode m :
         {GadgetMode::frechet_holes, GadgetMode::frechet_plane, GadgetMode::weak_terrain}) {
        INFO(mode_name(m));
        BaseCalibration cal = calibrate_base(p, m);
        INFO(cal.detail);
        REQUIRE(cal.fits);
        REQUIRE(cal.passable1);
        REQUIRE(cal.passable2);
        REQUIRE(cal.exclusive);
        REQUIRE(cal.ok());
        REQUIRE(cal.path1.v.size() >= 2);
        REQUIRE(cal.path2.v.size() >= 2);
    }
}

TEST_CASE("narrow clause flavor calibrates with the tighter corridor") {
    GadgetParams p = make_params(rat(32));
    BaseCalibration cal = calibrate_base(p, GadgetMode::frechet_holes, /*narrow=*/true);
    INFO(cal.detail);
    REQUIRE(cal.ok());
}

TEST_CASE("degenerate corridor demand fails calibration") {
    GadgetParams p = make_params(rat(32));
    p.corridor_w = rat(4) * p.eps;  // wider than the waist gap the wedges provide
    REQUIRE_NOTHROW(validate_params(p));
    BaseCalibration cal = calibrate_base(p, GadgetMode::frechet_holes);
    REQUIRE_FALSE(cal.fits);
    REQUIRE_FALSE(cal.ok());
    REQUIRE(cal.detail.find("corridor") != std::string::npos);
}

TEST_CASE("assembly tile geometry is consistent") {
    GadgetParams p = make_params(rat(32));
    for (bool narrow : {false, true}) {
        TileGeom t = make_tile(p, pt(10, -5), narrow);
        // Chords thread the waist and cross each other.
        Segment ca(t.chordA.front(), t.chordA.back());
        Segment cb(t.chordB.front(), t.chordB.back());
        REQUIRE(sgn(segment_segment_dist2(ca, cb)) == 0);
        for (const Triangle& w : {t.wedgeN, t.wedgeS}) {
            REQUIRE_FALSE(detail::segment_hits_triangle(ca, w));
            REQUIRE_FALSE(detail::segment_hits_triangle(cb, w));
        }
        // Detours bypass the wedges without touching them.
        for (const auto& det : {t.detourN, t.detourS})
            for (std::size_t i = 0; i + 1 < det.size(); ++i)
                for (const Triangle& w : {t.wedgeN, t.wedgeS})
                    REQUIRE_FALSE(
                        detail::segment_hits_triangle(Segment(det[i], det[i + 1]), w));
        // Portals sit clear of both wedges.
        for (const Point& portal : {t.wn, t.en, t.ws, t.es}) {
            REQUIRE_FALSE(point_in_triangle(portal, t.wedgeN));
            REQUIRE_FALSE(point_in_triangle(portal, t.wedgeS));
        }
    }
}
