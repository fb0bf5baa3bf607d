#pragma once
// Planar layout of a formula's variable-clause incidence graph, and the
// stringing walk that dictates the order in which the instance curve threads
// through the gadgets.
#include <algorithm>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/boyer_myrvold_planar_test.hpp>
#include <boost/graph/chrobak_payne_drawing.hpp>
#include <boost/graph/make_biconnected_planar.hpp>
#include <boost/graph/make_connected.hpp>
#include <boost/graph/make_maximal_planar.hpp>
#include <boost/graph/planar_canonical_ordering.hpp>
#include <boost/property_map/property_map.hpp>

#include "formula.hpp"
#include "geom.hpp"

namespace curvembed {

// Graph vertices: variables first (0..nvars-1), then clauses.
struct LayoutEdge {
    int var, clause;  // graph vertex ids
    int slot;         // which literal of the clause this occurrence is (0..2)
};

struct GraphLayout {
    int nvars = 0, nclauses = 0;
    std::vector<Point> pos;                  // straight-line positions, integer grid
    std::vector<LayoutEdge> edges;           // one per literal occurrence
    std::vector<std::vector<int>> rotation;  // per vertex: incident edge ids, ccw
    int nverts() const { return nvars + nclauses; }
    int clause_vertex(int j) const { return nvars + j; }
};

namespace detail {

// Counter-clockwise angular order around the origin, starting from the
// positive x axis.  Exact: upper half-plane first, then cross-product sign.
inline bool ccw_less(const Point& a, const Point& b) {
    auto half = [](const Point& p) {
        int sy = sgn(p.y);
        return (sy > 0 || (sy == 0 && sgn(p.x) > 0)) ? 0 : 1;
    };
    int ha = half(a), hb = half(b);
    if (ha != hb) return ha < hb;
    return sgn(cross2(a, b)) > 0;
}

}  // namespace detail

// Read the rotation system off the straight-line positions: incident edges
// sorted counter-clockwise around each vertex.  Parallel occurrences of one
// variable in one clause share a drawn edge; their rotation slots nest
// (ascending edge id at the variable, descending at the clause).
inline void fill_rotation(GraphLayout& L) {
    const int V = L.nverts();
    L.rotation.assign(V, {});
    for (int v = 0; v < V; ++v) {
        std::vector<int> inc;
        for (int e = 0; e < static_cast<int>(L.edges.size()); ++e)
            if (L.edges[e].var == v || L.edges[e].clause == v) inc.push_back(e);
        std::sort(inc.begin(), inc.end(), [&](int a, int b) {
            int oa = L.edges[a].var == v ? L.edges[a].clause : L.edges[a].var;
            int ob = L.edges[b].var == v ? L.edges[b].clause : L.edges[b].var;
            if (oa != ob)
                return detail::ccw_less(vsub(L.pos[oa], L.pos[v]), vsub(L.pos[ob], L.pos[v]));
            return L.edges[a].var == v ? a < b : a > b;
        });
        L.rotation[v] = std::move(inc);
    }
}

// Crossing-free straight-line drawing of the incidence graph with a rotation
// system read off from the drawing.  Deterministic.
inline GraphLayout planar_layout(const Formula3CNF& F) {
    GraphLayout L;
    L.nvars = F.nvars;
    L.nclauses = static_cast<int>(F.clauses.size());
    const int V = L.nverts();
    for (int j = 0; j < L.nclauses; ++j)
        for (int k = 0; k < 3; ++k)
            L.edges.push_back({lit_var(F.clauses[j][k]), L.clause_vertex(j), k});

    std::set<std::pair<int, int>> simple;
    for (const auto& e : L.edges) simple.insert({e.var, e.clause});

    if (V == 0) return L;
    if (V <= 2) {
        L.pos.push_back(pt(0, 0));
        if (V == 2) L.pos.push_back(pt(2, 0));
    } else {
        using Graph = boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS,
                                            boost::no_property,
                                            boost::property<boost::edge_index_t, int>>;
        Graph g(V);
        for (const auto& pr : simple) boost::add_edge(pr.first, pr.second, g);
        auto reindex = [&]() {
            auto idx = boost::get(boost::edge_index, g);
            int i = 0;
            for (auto [it, end] = boost::edges(g); it != end; ++it) boost::put(idx, *it, i++);
        };
        using EdgeVec = std::vector<boost::graph_traits<Graph>::edge_descriptor>;
        std::vector<EdgeVec> embedding(V);
        auto embed_map = boost::make_iterator_property_map(embedding.begin(),
                                                          boost::get(boost::vertex_index, g));
        reindex();
        require(boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                                    boost::boyer_myrvold_params::embedding =
                                                        embed_map),
                "formula graph is not planar");
        // Augment to a maximal planar graph (extra edges are only scaffolding
        // for the drawing), then draw it on the canonical grid.
        boost::make_connected(g);
        reindex();
        boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                            boost::boyer_myrvold_params::embedding = embed_map);
        boost::make_biconnected_planar(g, embed_map);
        reindex();
        boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                            boost::boyer_myrvold_params::embedding = embed_map);
        boost::make_maximal_planar(g, embed_map);
        reindex();
        boost::boyer_myrvold_planarity_test(boost::boyer_myrvold_params::graph = g,
                                            boost::boyer_myrvold_params::embedding = embed_map);
        std::vector<boost::graph_traits<Graph>::vertex_descriptor> ordering;
        boost::planar_canonical_ordering(g, embed_map, std::back_inserter(ordering));
        struct Coord {
            std::size_t x = 0, y = 0;
        };
        std::vector<Coord> coords(V);
        auto drawing = boost::make_iterator_property_map(coords.begin(),
                                                         boost::get(boost::vertex_index, g));
        boost::chrobak_payne_straight_line_drawing(g, embedding, ordering.begin(),
                                                   ordering.end(), drawing);
        for (int v = 0; v < V; ++v)
            L.pos.push_back(pt(static_cast<long>(coords[v].x), static_cast<long>(coords[v].y)));
    }

    fill_rotation(L);
    return L;
}

// One traversal step of the stringing walk: edge `edge` walked from `from` to
// `to`; `discover` marks the first arrival at `to`.
struct StringStep {
    int edge, from, to;
    bool discover;
};

struct StringingOrder {
    int start = 0;                // start variable (graph vertex id)
    std::vector<StringStep> steps;
    std::vector<int> prev_clause;  // per variable: discovering clause vertex, -1 for start
};

// Depth-first stringing walk: adjacent edges are taken counter-clockwise
// starting after the discovery edge.  A variable always completes its full
// rotation (discovery edge last, as the single return pass); a clause descends
// only into undiscovered variables and otherwise turns straight back, so the
// walk only ever abandons an explored direction while standing at a clause.
inline StringingOrder stringing_order(const GraphLayout& L, int start_var) {
    require(start_var >= 0 && start_var < L.nvars, "start must be a variable");
    const int V = L.nverts();
    StringingOrder so;
    so.start = start_var;
    so.prev_clause.assign(L.nvars, -1);
    std::vector<char> visited(V, 0);

    // iterate the rotation at v cyclically, starting after edge `after`
    auto cycle_from = [&](int v, int after) {
        const auto& rot = L.rotation[v];
        std::vector<int> out;
        std::size_t s = 0;
        if (after >= 0) {
            for (std::size_t i = 0; i < rot.size(); ++i)
                if (rot[i] == after) s = i + 1;
        }
        for (std::size_t i = 0; i < rot.size(); ++i) {
            int e = rot[(s + i) % rot.size()];
            if (e != after) out.push_back(e);
        }
        return out;
    };

    auto visit_variable = [&](auto&& self, int v, int e_d) -> void {
        visited[v] = 1;
        for (int e : cycle_from(v, e_d)) {
            int c = L.edges[e].clause;
            if (!visited[c]) {
                so.steps.push_back({e, v, c, true});
                // clause side
                visited[c] = 1;
                for (int ce : cycle_from(c, e)) {
                    int w = L.edges[ce].var;
                    if (visited[w]) continue;  // turn back without entering
                    so.steps.push_back({ce, c, w, true});
                    so.prev_clause[w] = c;
                    self(self, w, ce);
                }
                so.steps.push_back({e, c, v, false});
            } else {
                so.steps.push_back({e, v, c, false});
                so.steps.push_back({e, c, v, false});
            }
        }
        if (e_d >= 0) so.steps.push_back({e_d, v, L.edges[e_d].clause, false});
    };
    visit_variable(visit_variable, start_var, -1);

    for (int v = 0; v < V; ++v)
        require(visited[v] || L.rotation[v].empty(),
                "formula graph is disconnected; string components separately");
    return so;
}

}  // namespace curvembed
