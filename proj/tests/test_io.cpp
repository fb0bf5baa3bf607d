#include <catch2/catch_amalgamated.hpp>
#include <curvembed/io.hpp>

using namespace curvembed;

TEST_CASE("curve format") {
    PolyCurve c = parse_curve_text("CRV 2 2\n0 0\n1 0\n");
    CHECK(c.v.size() == 2);
    CHECK(c.v[1] == pt(1, 0));
    // decimals and fractions convert exactly; serialization is canonical p/q
    PolyCurve d = parse_curve_text("CRV 2 3\n0.5 -0.25\n2/6 1\n1 1e1\n");
    CHECK(d.v[0] == Point(rat(1, 2), rat(-1, 4)));
    CHECK(d.v[1] == Point(rat(1, 3), rat(1)));
    CHECK(d.v[2] == Point(rat(1), rat(10)));
    CHECK(serialize_curve(d) == "CRV 2 3\n1/2 -1/4\n1/3 1\n1 10\n");
    CHECK(parse_curve_text(serialize_curve(d)).v == d.v);
    // 3D
    PolyCurve e = parse_curve_text("CRV 3 2\n0 0 0\n1 2 3\n");
    CHECK(e.dim() == 3);
    CHECK(parse_curve_text(serialize_curve(e)).v == e.v);
}

TEST_CASE("curve format errors are line-tagged") {
    auto msg = [](auto fn) {
        try {
            fn();
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(msg([] { parse_curve_text("CRV 2 2\n0 0\n1\n", "f.crv"); }).find("f.crv:3") !=
          std::string::npos);
    CHECK(msg([] { parse_curve_text("CRV 2 2\n0 x\n1 0\n", "f.crv"); }).find("f.crv:2") !=
          std::string::npos);
    CHECK(msg([] { parse_curve_text("CRV 4 2\n", "f.crv"); }).find("dimension") !=
          std::string::npos);
    CHECK(msg([] { parse_curve_text("CRV 2 2\n0 0\n0 0\n", "f.crv"); }).find("repeated") !=
          std::string::npos);
    CHECK(msg([] { parse_curve_text("CRV 2 2\n0 0\n1 0\n2 0\n", "f.crv"); }).find("trailing") !=
          std::string::npos);
    CHECK_THROWS_AS(parse_curve_text(""), Error);
}

TEST_CASE("off format") {
    std::string off =
        "OFF\n4 2 5\n0 0\n1 0\n1 1\n0 1\n3 0 1 2\n3 0 2 3\n";
    TriSurface S = parse_off_text(off);
    CHECK(S.dim == 2);
    CHECK(S.ntris() == 2);
    CHECK(S.kind == SurfaceKind::plane_with_holes);  // default for 2D
    CHECK(serialize_off(S) == off);
    // header keyword optional
    CHECK(parse_off_text("4 2 0\n0 0\n1 0\n1 1\n0 1\n3 0 1 2\n3 0 2 3\n").ntris() == 2);
    // 3D defaults to terrain kind
    TriSurface T = parse_off_text("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 5\n3 0 1 2\n");
    CHECK(T.dim == 3);
    CHECK(T.kind == SurfaceKind::terrain);
    CHECK(parse_off_text(serialize_off(T)).verts == T.verts);
    // explicit kind override
    CHECK(parse_off_text(off, "<mesh>", SurfaceKind::plane_patch).kind ==
          SurfaceKind::plane_patch);
}

TEST_CASE("off format errors") {
    try {
        parse_off_text("OFF\n3 1 0\n0 0\n1 0\n0 1\n3 0 1 9\n", "m.off");
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("m.off:6") != std::string::npos);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_off_text("OFF\n1 1 0\n0 0\n4 0 0 0 0\n"), Error);
    CHECK_THROWS_AS(parse_off_text("OFF\n0 0 0\n"), Error);
}

TEST_CASE("meta format") {
    InstanceMeta m = parse_meta_text("eps 3/2\ntarget holes\nmode frechet\n");
    CHECK(m.eps == rat(3, 2));
    CHECK(m.target == "holes");
    CHECK(!m.weak);
    CHECK(serialize_meta(m) == "eps 3/2\ntarget holes\nmode frechet\n");
    InstanceMeta w = parse_meta_text(serialize_meta(InstanceMeta{rat(1, 4), "terrain", true}));
    CHECK(w.weak);
    CHECK(w.eps == rat(1, 4));
    CHECK_THROWS_AS(parse_meta_text("eps 1\ntarget holes\n"), Error);        // missing mode
    CHECK_THROWS_AS(parse_meta_text("eps 1\ntarget x\nmode weak\n"), Error); // bad target
}

TEST_CASE("dimacs format") {
    Formula3CNF F = parse_dimacs_text("c comment\np cnf 3 1\n1 2 3 0\n");
    CHECK(F.nvars == 3);
    REQUIRE(F.clauses.size() == 1);
    CHECK(F.clauses[0] == Clause{1, 2, 3});
    Formula3CNF G = parse_dimacs_text("p cnf 2 2\n1 1 1 0\n-1 2 -2 0\n");
    CHECK(G.clauses.size() == 2);
    CHECK(parse_dimacs_text(serialize_dimacs(G)).clauses == G.clauses);
    // split across lines
    CHECK(parse_dimacs_text("p cnf 3 1\n1 2\n3 0\n").clauses.size() == 1);
    CHECK_THROWS_AS(parse_dimacs_text("p cnf 3 1\n1 2 0\n"), Error);      // not 3 literals
    CHECK_THROWS_AS(parse_dimacs_text("p cnf 3 2\n1 2 3 0\n"), Error);    // count mismatch
    CHECK_THROWS_AS(parse_dimacs_text("p cnf 2 1\n1 2 3 0\n"), Error);    // out of range
    CHECK_THROWS_AS(parse_dimacs_text("1 2 3 0\n"), Error);               // no header
    CHECK_THROWS_AS(parse_dimacs_text("p cnf 3 1\n1 2 3\n"), Error);      // unterminated
}

TEST_CASE("annotations format") {
    std::vector<UnitRecord> units(2);
    units[0].id = 0;
    units[0].kind = "signal";
    units[0].gadget = "wire v0 c0";
    units[0].lo = 0;
    units[0].hi = 12;
    units[0].wire = 0;
    units[0].corridorT = {pt(0, 0), pt(1, 0)};
    units[0].corridorF = {pt(0, 1), pt(1, 1)};
    units[1].id = 1;
    units[1].kind = "signal";
    units[1].gadget = "clause c0 middle";
    units[1].lo = 12;
    units[1].hi = 20;
    units[1].wire = 1;
    units[1].corridorT = {pt(2, 0), pt(3, 0)};
    units[1].corridorF = {pt(2, 1), pt(3, 1)};
    units[1].corridorF2 = {Point(rat(5, 2), rat(7, 3)), pt(3, 2)};
    std::string text = serialize_annotations(units);
    auto parsed = parse_annotations_text(text, 2);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].gadget == "wire v0 c0");
    CHECK(parsed[0].corridorF2.empty());
    CHECK(parsed[1].corridorF2 == units[1].corridorF2);
    CHECK(parsed[1].wire == 1);
    CHECK(serialize_annotations(parsed) == text);
    CHECK_THROWS_AS(parse_annotations_text("unit 0\nbogus x\nend\n", 2), Error);
}
