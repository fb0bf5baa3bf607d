#include <catch2/catch_amalgamated.hpp>
#include <curvembed/layout.hpp>

using namespace curvembed;

namespace {

// deduped drawn segments that do not share a graph vertex must be disjoint
void check_crossing_free(const GraphLayout& L) {
    std::set<std::pair<int, int>> simple;
    for (const auto& e : L.edges) simple.insert({e.var, e.clause});
    std::vector<std::pair<int, int>> es(simple.begin(), simple.end());
    for (std::size_t i = 0; i < es.size(); ++i)
        for (std::size_t j = i + 1; j < es.size(); ++j) {
            auto [a, b] = es[i];
            auto [c, d] = es[j];
            if (a == c || a == d || b == c || b == d) continue;
            Segment s1(L.pos[a], L.pos[b]), s2(L.pos[c], L.pos[d]);
            CHECK(sgn(segment_segment_dist2(s1, s2)) > 0);
        }
}

}  // namespace

TEST_CASE("single-clause star lays out and strings in rotation order") {
    Formula3CNF F = make_formula(3, {{1, 2, 3}});
    GraphLayout L = planar_layout(F);
    REQUIRE(L.nverts() == 4);
    REQUIRE(L.edges.size() == 3);
    check_crossing_free(L);
    for (int v = 0; v < 4; ++v)
        for (int w = v + 1; w < 4; ++w) CHECK_FALSE(L.pos[v] == L.pos[w]);

    StringingOrder so = stringing_order(L, 0);
    REQUIRE(so.steps.size() == 6);
    // first step discovers the clause from the start variable, last returns
    int c = L.clause_vertex(0);
    CHECK(so.steps.front().from == 0);
    CHECK(so.steps.front().to == c);
    CHECK(so.steps.front().discover);
    CHECK(so.steps.back().from == c);
    CHECK(so.steps.back().to == 0);
    CHECK_FALSE(so.steps.back().discover);
    // middle: two out-and-back discoveries of the other variables
    CHECK(so.steps[1].discover);
    CHECK(so.steps[2].edge == so.steps[1].edge);
    CHECK(so.steps[3].discover);
    CHECK(so.steps[4].edge == so.steps[3].edge);
    CHECK(((so.steps[1].to == 1 && so.steps[3].to == 2) ||
           (so.steps[1].to == 2 && so.steps[3].to == 1)));
    CHECK(so.prev_clause[0] == -1);
    CHECK(so.prev_clause[1] == c);
    CHECK(so.prev_clause[2] == c);
}

TEST_CASE("prescribed star positions reproduce the canonical walk") {
    // clause at the origin, variables at angles 90, 210, 330 degrees
    GraphLayout L;
    L.nvars = 3;
    L.nclauses = 1;
    L.pos = {pt(0, 4), pt(-4, -2), pt(4, -2), pt(0, 0)};
    L.edges = {{0, 3, 0}, {1, 3, 1}, {2, 3, 2}};
    fill_rotation(L);
    REQUIRE(L.rotation[3] == std::vector<int>{0, 1, 2});

    StringingOrder so = stringing_order(L, 0);
    std::vector<StringStep> want = {
        {0, 0, 3, true},  {1, 3, 1, true}, {1, 1, 3, false},
        {2, 3, 2, true},  {2, 2, 3, false}, {0, 3, 0, false},
    };
    REQUIRE(so.steps.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
        CHECK(so.steps[i].edge == want[i].edge);
        CHECK(so.steps[i].from == want[i].from);
        CHECK(so.steps[i].to == want[i].to);
        CHECK(so.steps[i].discover == want[i].discover);
    }
}

TEST_CASE("non-planar incidence graph is rejected") {
    // three clauses over the same three variables form K3,3
    Formula3CNF F = make_formula(3, {{1, 2, 3}, {1, 2, 3}, {1, 2, 3}});
    CHECK_THROWS_WITH(planar_layout(F), Catch::Matchers::ContainsSubstring("not planar"));
}

TEST_CASE("parallel occurrences become separate out-and-back traversals") {
    Formula3CNF F = make_formula(1, {{1, 1, 1}});
    GraphLayout L = planar_layout(F);
    REQUIRE(L.edges.size() == 3);
    StringingOrder so = stringing_order(L, 0);
    REQUIRE(so.steps.size() == 6);
    // each edge appears exactly twice, in opposite directions, consecutively
    for (int e = 0; e < 3; ++e) {
        int count = 0;
        for (const auto& st : so.steps)
            if (st.edge == e) ++count;
        CHECK(count == 2);
    }
    for (std::size_t i = 0; i < 6; i += 2) {
        CHECK(so.steps[i].edge == so.steps[i + 1].edge);
        CHECK(so.steps[i].from == 0);
        CHECK(so.steps[i + 1].to == 0);
    }
    // only the first arrival at the clause is a discovery
    CHECK(so.steps[0].discover);
    CHECK_FALSE(so.steps[2].discover);
    CHECK_FALSE(so.steps[4].discover);
}

TEST_CASE("two clauses sharing variables draw without crossings") {
    Formula3CNF F = make_formula(4, {{1, 2, 3}, {-1, -2, 4}});
    GraphLayout L = planar_layout(F);
    check_crossing_free(L);
    StringingOrder so = stringing_order(L, 0);
    // every edge is walked exactly twice (once per direction)
    std::map<int, int> uses;
    for (const auto& st : so.steps) ++uses[st.edge];
    REQUIRE(uses.size() == L.edges.size());
    for (const auto& [e, n] : uses) CHECK(n == 2);
    // walk is closed at the start variable
    CHECK(so.steps.front().from == 0);
    CHECK(so.steps.back().to == 0);
    // discoveries cover every vertex except the start
    std::set<int> disc;
    for (const auto& st : so.steps)
        if (st.discover) disc.insert(st.to);
    CHECK(disc.size() == static_cast<std::size_t>(L.nverts() - 1));
}

TEST_CASE("larger planar formula keeps determinism") {
    Formula3CNF F = make_formula(5, {{1, 2, 3}, {3, 4, 5}, {-1, 4, -5}});
    GraphLayout a = planar_layout(F);
    GraphLayout b = planar_layout(F);
    REQUIRE(a.pos.size() == b.pos.size());
    for (std::size_t i = 0; i < a.pos.size(); ++i) CHECK(a.pos[i] == b.pos[i]);
    REQUIRE(a.rotation == b.rotation);
    check_crossing_free(a);
}
