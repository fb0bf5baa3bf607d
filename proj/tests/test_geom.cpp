#include <catch2/catch_amalgamated.hpp>
#include <curvembed/geom.hpp>

#include <random>

using namespace curvembed;

TEST_CASE("point-segment distance") {
    CHECK(point_segment_dist2(pt(0, 0), Segment(pt(0, 1), pt(2, 1))) == rat(1));
    CHECK(point_segment_dist2(pt(3, 0), Segment(pt(0, 1), pt(2, 1))) == rat(2));
    CHECK(point_segment_dist2(pt(1, 1), Segment(pt(1, 1), pt(5, 1))) == rat(0));
    // zero distance iff on segment
    CHECK(point_on_segment(Point(rat(1, 2), rat(0)), Segment(pt(0, 0), pt(1, 0))));
    CHECK(!point_on_segment(Point(rat(1, 2), rat(1, 1000000)), Segment(pt(0, 0), pt(1, 0))));
    // degenerate segment
    CHECK(point_segment_dist2(pt(3, 4), Segment(pt(0, 0), pt(0, 0))) == rat(25));
    CHECK_THROWS_AS(point_segment_dist2(pt3(0, 0, 0), Segment(pt(0, 1), pt(2, 1))), Error);
}

TEST_CASE("closest point on triangle") {
    Triangle t{pt3(0, 0, 0), pt3(4, 0, 0), pt3(0, 4, 0)};
    CHECK(point_triangle_dist2(pt3(1, 1, 2), t) == rat(4));   // foot inside
    CHECK(point_triangle_dist2(pt3(-3, -4, 0), t) == rat(25));  // vertex region
    CHECK(point_triangle_dist2(pt3(6, 0, 0), t) == rat(4));   // edge region, in plane
    CHECK(point_triangle_dist2(pt3(1, 1, 0), t) == rat(0));
    CHECK(closest_point_on_triangle(pt3(1, 1, 7), t) == pt3(1, 1, 0));
    Triangle t2{pt(0, 0), pt(2, 0), pt(0, 2)};
    CHECK(point_in_triangle(pt(0, 0), t2));
    CHECK(point_in_triangle(pt(1, 1), t2));  // on hypotenuse
    CHECK(!point_in_triangle(Point(rat(1), rat(1, 1) + rat(1, 1000000)), t2));
    CHECK(!point_in_triangle(pt3(1, 1, 1), t));  // off plane
}

TEST_CASE("segment pair classification") {
    auto x = segment_pair_intersection(Segment(pt(0, 0), pt(2, 2)), Segment(pt(0, 2), pt(2, 0)));
    CHECK(x.rel == SegRel::proper);
    CHECK(*x.point == pt(1, 1));
    CHECK(segment_pair_intersection(Segment(pt(0, 0), pt(1, 0)), Segment(pt(0, 1), pt(1, 1))).rel ==
          SegRel::disjoint);
    auto tch = segment_pair_intersection(Segment(pt(0, 0), pt(2, 0)), Segment(pt(2, 0), pt(3, 5)));
    CHECK(tch.rel == SegRel::touching);
    CHECK(*tch.point == pt(2, 0));
    // endpoint touching an interior
    auto mid = segment_pair_intersection(Segment(pt(0, 0), pt(4, 0)), Segment(pt(2, 0), pt(2, 3)));
    CHECK(mid.rel == SegRel::touching);
    CHECK(*mid.point == pt(2, 0));
    // collinear overlap
    auto ov = segment_pair_intersection(Segment(pt(0, 0), pt(4, 0)), Segment(pt(2, 0), pt(6, 0)));
    CHECK(ov.rel == SegRel::overlap);
    CHECK(point_on_segment(*ov.point, Segment(pt(2, 0), pt(4, 0))));
    // collinear but apart
    CHECK(segment_pair_intersection(Segment(pt(0, 0), pt(1, 0)), Segment(pt(2, 0), pt(3, 0))).rel ==
          SegRel::disjoint);
    // 3D: skew lines never intersect
    CHECK(segment_pair_intersection(Segment(pt3(-1, 0, 0), pt3(1, 0, 0)),
                                    Segment(pt3(0, -1, 1), pt3(0, 1, 1)))
              .rel == SegRel::disjoint);
    auto x3 = segment_pair_intersection(Segment(pt3(-1, 0, 0), pt3(1, 0, 0)),
                                        Segment(pt3(0, -1, 0), pt3(0, 1, 0)));
    CHECK(x3.rel == SegRel::proper);
    CHECK(*x3.point == pt3(0, 0, 0));
    // degenerate segments
    CHECK(segment_pair_intersection(Segment(pt(1, 0), pt(1, 0)), Segment(pt(0, 0), pt(2, 0))).rel ==
          SegRel::touching);
    CHECK(segment_pair_intersection(Segment(pt(1, 1), pt(1, 1)), Segment(pt(0, 0), pt(2, 0))).rel ==
          SegRel::disjoint);
}

TEST_CASE("segment pair classification is symmetric") {
    std::mt19937_64 rng(7);
    auto rnd = [&]() { return pt(static_cast<long>(rng() % 7), static_cast<long>(rng() % 7)); };
    for (int it = 0; it < 300; ++it) {
        Point a = rnd(), b = rnd(), c = rnd(), d = rnd();
        if (a == b || c == d) continue;
        Segment s1(a, b), s2(c, d);
        auto r1 = segment_pair_intersection(s1, s2);
        auto r2 = segment_pair_intersection(s2, s1);
        CHECK(r1.rel == r2.rel);
        if (r1.rel == SegRel::proper) CHECK(*r1.point == *r2.point);
    }
}

TEST_CASE("closest pair between segments") {
    // interior-interior skew pair
    auto [x, y] = closest_pair_segments(Segment(pt3(-1, 0, 0), pt3(1, 0, 0)),
                                        Segment(pt3(0, -1, 1), pt3(0, 1, 1)));
    CHECK(x == pt3(0, 0, 0));
    CHECK(y == pt3(0, 0, 1));
    CHECK(segment_segment_dist2(Segment(pt(0, 0), pt(2, 2)), Segment(pt(0, 2), pt(2, 0))) == rat(0));
    CHECK(segment_segment_dist2(Segment(pt(0, 0), pt(1, 0)), Segment(pt(0, 1), pt(1, 1))) == rat(1));
    CHECK(segment_segment_dist2(Segment(pt(0, 0), pt(1, 0)), Segment(pt(3, 0), pt(3, 5))) == rat(4));
    // parallel overlapping shadows
    CHECK(segment_segment_dist2(Segment(pt(0, 0), pt(10, 0)), Segment(pt(3, 2), pt(7, 2))) == rat(4));
}

TEST_CASE("segment-triangle distance") {
    Triangle t{pt3(0, 0, 0), pt3(4, 0, 0), pt3(0, 4, 0)};
    CHECK(segment_triangle_dist2(Segment(pt3(1, 1, -1), pt3(1, 1, 1)), t) == rat(0));  // pierces
    CHECK(segment_triangle_dist2(Segment(pt3(1, 1, 2), pt3(2, 1, 3)), t) == rat(4));
    CHECK(segment_triangle_dist2(Segment(pt3(1, 1, 5), pt3(2, 2, 5)), t) == rat(25));  // parallel above
    CHECK(segment_triangle_dist2(Segment(pt3(6, 0, 0), pt3(6, 4, 0)), t) == rat(4));   // coplanar outside
    CHECK(segment_triangle_dist2(Segment(pt3(1, 1, 0), pt3(2, 1, 0)), t) == rat(0));   // coplanar inside
    CHECK(segment_triangle_dist2(Segment(pt3(-1, -1, 0), pt3(5, -1, 0)), t) == rat(1));
}

TEST_CASE("simplicity") {
    CHECK(is_simple(make_curve({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)})).simple);
    auto figx = is_simple(make_curve({pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)}));
    REQUIRE(!figx.simple);
    REQUIRE(figx.crossings.size() == 1);
    CHECK(figx.crossings[0].i == 0);
    CHECK(figx.crossings[0].j == 2);
    CHECK(figx.crossings[0].witness == pt(1, 1));
    // backtracking overlap of adjacent segments
    auto back = is_simple(make_curve({pt(0, 0), pt(1, 0), pt(0, 0)}));
    CHECK(!back.simple);
    // closed square: cyclically adjacent first/last share an endpoint, fine
    CHECK(is_simple(make_curve({pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1), pt(0, 0)})).simple);
    // non-adjacent touching counts as a violation
    auto touch = is_simple(make_curve({pt(0, 0), pt(4, 0), pt(4, 4), pt(2, 0)}));
    CHECK(!touch.simple);
    // partial adjacent overlap going back over the previous segment
    auto partial = is_simple(make_curve({pt(0, 0), pt(4, 0), pt(1, 0)}));
    CHECK(!partial.simple);
}

TEST_CASE("simplicity is stable under small perturbation") {
    std::mt19937_64 rng(11);
    for (int it = 0; it < 60; ++it) {
        // monotone staircase: simple by construction, features >= 1 apart
        std::vector<Point> pts;
        long x = 0, y = 0;
        pts.push_back(pt(x, y));
        for (int k = 0; k < 9; ++k) {
            if (rng() % 2)
                x += 1 + static_cast<long>(rng() % 3);
            else
                y += 1 + static_cast<long>(rng() % 3);
            pts.push_back(pt(x, y));
        }
        PolyCurve c = make_curve(pts);
        REQUIRE(is_simple(c).simple);
        // perturb each vertex by < 1/8 in each coordinate
        std::vector<Point> moved;
        for (const auto& p : c.v) {
            Rat dx = rat(static_cast<long>(rng() % 2001) - 1000, 9000);
            Rat dy = rat(static_cast<long>(rng() % 2001) - 1000, 9001);
            moved.push_back(Point(p.x + dx, p.y + dy));
        }
        CHECK(is_simple(make_curve(moved)).simple);
    }
}

TEST_CASE("free interval") {
    Tol eps2 = tol_of_square(rat(2));  // eps = sqrt(2)
    auto iv = free_interval(pt(0, 0), Segment(pt(-2, 1), pt(2, 1)), eps2);
    REQUIRE(iv);
    CHECK(iv->first == Quad(rat(1, 4)));
    CHECK(iv->second == Quad(rat(3, 4)));
    CHECK(!free_interval(pt(0, 0), Segment(pt(0, 5), pt(1, 5)), tol_of_value(rat(1))));
    auto point_iv = free_interval(pt(0, 0), Segment(pt(-1, 0), pt(1, 0)), tol_of_value(rat(0)));
    REQUIRE(point_iv);
    CHECK(point_iv->first == Quad(rat(1, 2)));
    CHECK(point_iv->second == Quad(rat(1, 2)));
    // irrational endpoints: |p - s(u)| = 1 on y=x line segment
    auto irr = free_interval(pt(0, 0), Segment(pt(0, 0), pt(2, 2)), tol_of_value(rat(1)));
    REQUIRE(irr);
    CHECK(irr->first == Quad(rat(0)));
    CHECK(irr->second == quad_scale(rat(1, 4), quad_sqrt(rat(2))));  // u = 1/(2 sqrt 2)
    // degenerate segment
    auto deg = free_interval(pt(0, 0), Segment(pt(1, 0), pt(1, 0)), tol_of_value(rat(2)));
    REQUIRE(deg);
    CHECK(deg->first == Quad(rat(0)));
    CHECK(deg->second == Quad(rat(1)));
}

TEST_CASE("free interval monotone in eps") {
    std::mt19937_64 rng(23);
    auto rnd = [&]() { return rat(static_cast<long>(rng() % 17) - 8, 1 + static_cast<long>(rng() % 4)); };
    for (int it = 0; it < 120; ++it) {
        Point p(rnd(), rnd());
        Point a(rnd(), rnd()), b(rnd(), rnd());
        if (a == b) continue;
        Segment s(a, b);
        Rat e1 = rat_abs(rnd()), e2 = e1 + rat_abs(rnd());
        auto i1 = free_interval(p, s, tol_of_value(e1));
        auto i2 = free_interval(p, s, tol_of_value(e2));
        if (i1) {
            REQUIRE(i2);
            CHECK(quad_cmp(i2->first, i1->first) <= 0);
            CHECK(quad_cmp(i1->second, i2->second) <= 0);
        }
    }
}

TEST_CASE("bbox prefilters are conservative") {
    Segment s1(pt(0, 0), pt(1, 1)), s2(pt(5, 5), pt(6, 6));
    CHECK(bbox_farther_than(bbox_of_segment(s1), bbox_of_segment(s2), 4.0));
    CHECK(!bbox_farther_than(bbox_of_segment(s1), bbox_of_segment(s2), 40.0));
    CHECK(bbox_overlap(bbox_of_segment(s1), bbox_of_segment(Segment(pt(1, 1), pt(2, 0)))));
}
