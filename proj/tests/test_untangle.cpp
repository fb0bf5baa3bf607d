#include <catch2/catch_amalgamated.hpp>
#include <curvembed/embed.hpp>

#include <random>

using namespace curvembed;

namespace {

void check_untangled(const PolyCurve& in, const PolyCurve& out, const Rat& delta) {
    CHECK(is_simple(out).simple);
    CHECK(quad_cmp(hausdorff_dist2(in, out), Quad(delta * delta)) <= 0);
}

}  // namespace

TEST_CASE("already-simple curves pass through unchanged") {
    std::vector<PolyCurve> cs = {
        make_curve({pt(0, 0), pt(5, 1)}),
        make_curve({pt(0, 0), pt(2, 2), pt(4, 0), pt(6, 3)}),
        make_curve({pt(-1, -1), pt(0, 3), pt(4, 3), pt(4, -2), pt(1, -2)}),
    };
    for (const auto& c : cs) {
        PolyCurve out = untangle(c, rat(1, 16));
        REQUIRE(out.v.size() == c.v.size());
        for (std::size_t k = 0; k < c.v.size(); ++k) CHECK(out.v[k] == c.v[k]);
    }
}

TEST_CASE("bowtie crossing is removed within the offset bound") {
    PolyCurve x = make_curve({pt(0, 0), pt(2, 2), pt(2, 0), pt(0, 2)});
    REQUIRE_FALSE(is_simple(x).simple);
    Rat d = rat(1, 16);
    PolyCurve out = untangle(x, d);
    check_untangled(x, out, d);
    // the endpoints stay put: each is visited once
    CHECK(out.v.front() == x.v.front());
    CHECK(out.v.back() == x.v.back());
}

TEST_CASE("retraced segment splits into a thin loop") {
    Point A = pt(0, 0), B = pt(6, 0);
    PolyCurve c = make_curve({A, B, A});
    REQUIRE_FALSE(is_simple(c).simple);
    Rat d = rat(1, 8);
    PolyCurve out = untangle(c, d);
    check_untangled(c, out, d);
    CHECK(out.v.front() == A);
    // the far end turns near B
    bool near_b = false;
    for (const auto& p : out.v)
        if (dist2(p, B) <= d * d) near_b = true;
    CHECK(near_b);
}

TEST_CASE("multiply-retraced path") {
    Point A = pt(0, 0), B = pt(4, 0), C = pt(8, 0);
    PolyCurve c = make_curve({A, B, C, B, A, B});
    Rat d = rat(1, 8);
    PolyCurve out = untangle(c, d);
    check_untangled(c, out, d);
}

TEST_CASE("random grid tangles") {
    std::mt19937 rng(424242u);
    auto randint = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };
    Rat d = rat(1, 32);
    int done = 0;
    while (done < 12) {
        int n = randint(4, 7);
        std::vector<Point> pv;
        for (int k = 0; k < n; ++k) {
            Point p = pt(randint(-4, 4), randint(-4, 4));
            if (!pv.empty() && p == pv.back()) continue;
            pv.push_back(p);
        }
        if (pv.size() < 3) continue;
        PolyCurve c = make_curve(pv);
        PolyCurve out = untangle(c, d);
        check_untangled(c, out, d);
        ++done;
    }
}
