#include <catch2/catch_amalgamated.hpp>
#include <curvembed/rational.hpp>

using namespace curvembed;

TEST_CASE("construction canonicalizes") {
    CHECK(rat(2, 6) == rat(1, 3));
    CHECK(rat(1, -2) == rat(-1, 2));
    CHECK(rat_str(rat(4, 6)) == "2/3");
    CHECK(rat_str(rat(3, 1)) == "3");
    CHECK(rat_str(rat(1, -2)) == "-1/2");
    CHECK(rat_str(rat(0, 7)) == "0");
    CHECK_THROWS_AS(rat(1, 0), Error);
}

TEST_CASE("parsing") {
    CHECK(rat_parse("2/6") == rat(1, 3));
    CHECK(rat_parse("-7/2") == rat(-7, 2));
    CHECK(rat_parse("42") == rat(42));
    CHECK(rat_parse("-0.125") == rat(-1, 8));
    CHECK(rat_parse("2.5") == rat(5, 2));
    CHECK(rat_parse("1e-3") == rat(1, 1000));
    CHECK(rat_parse("2.5e2") == rat(250));
    CHECK(rat_parse("+3.0e-1") == rat(3, 10));
    CHECK(rat_parse(".5") == rat(1, 2));
    CHECK(!rat_parse(""));
    CHECK(!rat_parse("abc"));
    CHECK(!rat_parse("1/0"));
    CHECK(!rat_parse("1.2.3"));
    CHECK(!rat_parse("1/2/3"));
    CHECK(!rat_parse("."));
    CHECK(rat_parse("123456789012345678901234567890/7") ==
          rat(Int("123456789012345678901234567890"), Int(7)));
}

TEST_CASE("round trip through canonical string") {
    for (long n = -20; n <= 20; ++n)
        for (long d = 1; d <= 12; ++d) {
            Rat q = rat(n, d);
            CHECK(rat_parse(rat_str(q)) == q);
        }
}

TEST_CASE("floor and ceil") {
    CHECK(rat_floor(rat(7, 2)) == 3);
    CHECK(rat_ceil(rat(7, 2)) == 4);
    CHECK(rat_floor(rat(-7, 2)) == -4);
    CHECK(rat_ceil(rat(-7, 2)) == -3);
    CHECK(rat_floor(rat(4)) == 4);
    CHECK(rat_ceil(rat(4)) == 4);
}

TEST_CASE("tolerance stores its square") {
    Tol t = tol_of_square(rat(2));  // tolerance sqrt(2)
    CHECK(t.sq == rat(2));
    CHECK(tol_of_value(rat(3, 2)).sq == rat(9, 4));
    CHECK_THROWS_AS(tol_of_square(rat(-1)), Error);
}
