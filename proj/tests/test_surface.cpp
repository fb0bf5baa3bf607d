#include <catch2/catch_amalgamated.hpp>
#include <curvembed/surface.hpp>

#include <random>

using namespace curvembed;

namespace {

TriSurface unit_square() {
    return make_surface(2, SurfaceKind::plane_patch,
                        {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)},
                        {{0, 1, 2}, {0, 2, 3}});
}

TriSurface grid_patch(int nx, int ny) {
    std::vector<Point> verts;
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i) verts.push_back(pt(i, j));
    auto vid = [&](int i, int j) { return j * (nx + 1) + i; };
    std::vector<std::array<int, 3>> tris;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            tris.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
            tris.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
    return make_surface(2, SurfaceKind::plane_patch, std::move(verts), std::move(tris));
}

}  // namespace

TEST_CASE("adjacency construction") {
    TriSurface S = unit_square();
    CHECK(S.edges.size() == 5);
    int shared = 0;
    for (const auto& e : S.edges)
        if (e.t1 != -1) {
            ++shared;
            CHECK(((e.u == 0 && e.v == 2)));
            CHECK(e.t0 == 0);
            CHECK(e.t1 == 1);
        }
    CHECK(shared == 1);
    for (int t = 0; t < S.ntris(); ++t)
        for (int j = 0; j < 3; ++j) {
            int eid = S.tri_edge[t][j];
            const auto& e = S.edges[eid];
            CHECK((e.t0 == t || e.t1 == t));
        }
    CHECK(S.vert_tris[0].size() == 2);
    CHECK(S.vert_tris[1].size() == 1);
}

TEST_CASE("validation failures") {
    CHECK_THROWS_AS(make_surface(2, SurfaceKind::plane_patch, {pt(0, 0), pt(1, 0)}, {{0, 1, 2}}),
                    Error);
    CHECK_THROWS_AS(make_surface(2, SurfaceKind::plane_patch,
                                 {pt(0, 0), pt(1, 0), pt(2, 0)}, {{0, 1, 2}}),
                    Error);  // degenerate
    // inconsistent orientation: both triangles traverse the shared edge the same way
    CHECK_THROWS_AS(make_surface(2, SurfaceKind::plane_patch,
                                 {pt(0, 0), pt(1, 0), pt(1, 1), pt(0, 1)},
                                 {{0, 1, 2}, {0, 3, 2}}),
                    Error);
    // edge shared by three triangles
    CHECK_THROWS_AS(make_surface(3, SurfaceKind::terrain,
                                 {pt3(0, 0, 0), pt3(1, 0, 0), pt3(0, 1, 0), pt3(0, -1, 0),
                                  pt3(1, 1, 1)},
                                 {{0, 1, 2}, {0, 3, 1}, {0, 1, 4}}),
                    Error);
    // terrain triangle with degenerate xy-projection (vertical wall)
    CHECK_THROWS_AS(make_surface(3, SurfaceKind::terrain,
                                 {pt3(0, 0, 0), pt3(1, 0, 0), pt3(1, 0, 1)}, {{0, 1, 2}}),
                    Error);
    // same wall is fine when the kind is not terrain
    CHECK(make_surface(3, SurfaceKind::plane_patch,
                       {pt3(0, 0, 0), pt3(1, 0, 0), pt3(1, 0, 1)}, {{0, 1, 2}})
              .ntris() == 1);
}

TEST_CASE("locate basics") {
    TriSurface S = unit_square();
    CHECK(locate(Point(rat(2, 3), rat(1, 3)), S) == 0);   // inside lower triangle
    CHECK(locate(Point(rat(1, 3), rat(2, 3)), S) == 1);   // inside upper triangle
    CHECK(locate(Point(rat(1, 2), rat(1, 2)), S) == 0);   // on shared edge: lower id
    CHECK(locate(pt(0, 0), S) == 0);                      // shared vertex: lowest id
    CHECK(locate(pt(2, 2), S) == LOCATE_OUTSIDE);
    CHECK(locate(Point(rat(1, 2), rat(-1, 1000000)), S) == LOCATE_OUTSIDE);
    auto both = locate_all(Point(rat(1, 2), rat(1, 2)), S);
    CHECK(both == std::vector<int>{0, 1});
    CHECK_THROWS_AS(locate(pt3(0, 0, 0), S), Error);
}

TEST_CASE("locate on a hole") {
    // square ring: outer [0,3]^2 with inner hole (1,2)^2 removed
    std::vector<Point> verts;
    std::vector<std::array<int, 3>> tris;
    // outer corners 0..3, inner corners 4..7 (ccw both)
    verts = {pt(0, 0), pt(3, 0), pt(3, 3), pt(0, 3), pt(1, 1), pt(2, 1), pt(2, 2), pt(1, 2)};
    auto quad = [&](int a, int b, int c, int d) {
        tris.push_back({a, b, c});
        tris.push_back({a, c, d});
    };
    quad(0, 1, 5, 4);  // bottom band
    quad(1, 2, 6, 5);  // right band
    quad(2, 3, 7, 6);  // top band
    quad(3, 0, 4, 7);  // left band
    TriSurface S = make_surface(2, SurfaceKind::plane_with_holes, verts, tris);
    CHECK(locate(Point(rat(3, 2), rat(3, 2)), S) == LOCATE_OUTSIDE);  // hole center
    CHECK(locate(Point(rat(3, 2), rat(1, 2)), S) != LOCATE_OUTSIDE);
    CHECK(locate(Point(rat(3, 2), rat(1)), S) != LOCATE_OUTSIDE);     // on hole boundary
    CHECK(!segment_on_surface(Segment(Point(rat(1, 2), rat(3, 2)), Point(rat(5, 2), rat(3, 2))), S));
    CHECK(segment_on_surface(Segment(Point(rat(1, 2), rat(1, 2)), Point(rat(5, 2), rat(1, 2))), S));
    // running along the hole boundary is allowed (closed triangles)
    CHECK(segment_on_surface(Segment(pt(1, 1), pt(2, 1)), S));
}

TEST_CASE("locate agrees with brute force on a grid patch") {
    TriSurface S = grid_patch(10, 10);
    std::mt19937_64 rng(5);
    for (int it = 0; it < 200; ++it) {
        Point p(rat(static_cast<long>(rng() % 1200) - 60, 100),
                rat(static_cast<long>(rng() % 1200) - 60, 100));
        int got = locate(p, S);
        int want = LOCATE_OUTSIDE;
        for (int t = 0; t < S.ntris() && want == LOCATE_OUTSIDE; ++t)
            if (point_in_triangle(p, S.triangle(t))) want = t;
        CHECK(got == want);
    }
}

TEST_CASE("segment walking on a grid patch") {
    TriSurface S = grid_patch(6, 6);
    CHECK(segment_on_surface(Segment(Point(rat(1, 2), rat(1, 2)), Point(rat(11, 2), rat(9, 2))), S));
    CHECK(segment_on_surface(Segment(pt(0, 0), pt(6, 6)), S));  // along diagonals and vertices
    CHECK(!segment_on_surface(Segment(pt(3, 3), pt(8, 3)), S)); // exits the patch
    CHECK(segment_on_surface(Segment(pt(0, 0), pt(6, 0)), S));  // along the outer boundary
}
