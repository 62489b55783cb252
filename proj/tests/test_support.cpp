#include <algorithm>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "truss/graph.hpp"
#include "truss/support.hpp"

using namespace truss;

namespace {

// All-triples reference count, usable up to a few dozen vertices.
SupportMap brute_support(const Graph& g) {
    SupportMap s;
    auto vs = g.vertices();
    for (const Edge& e : g.edges()) s.support[e] = 0;
    for (std::size_t i = 0; i < vs.size(); ++i)
        for (std::size_t j = i + 1; j < vs.size(); ++j)
            for (std::size_t k = j + 1; k < vs.size(); ++k) {
                if (!g.has_edge(vs[i], vs[j]) || !g.has_edge(vs[j], vs[k]) ||
                    !g.has_edge(vs[i], vs[k]))
                    continue;
                ++s.support[Edge(vs[i], vs[j])];
                ++s.support[Edge(vs[j], vs[k])];
                ++s.support[Edge(vs[i], vs[k])];
            }
    return s;
}

} // namespace

TEST_CASE("support matches the all-triples count on random graphs") {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        Graph g = generate_erdos_renyi(35 + 5 * seed, 0.15 + 0.05 * seed, seed);
        SupportMap want = brute_support(g);
        SupportMap hash = compute_support(g);
        SupportMap merge = compute_support_merge(g);
        REQUIRE(hash.support.size() == want.support.size());
        REQUIRE(merge.support.size() == want.support.size());
        for (const auto& [e, s] : want.support) {
            CHECK(hash.at(e) == s);
            CHECK(merge.at(e) == s);
        }
    }
}

TEST_CASE("total support is three times the triangle count") {
    Graph g = generate_erdos_renyi(60, 0.2, 9);
    SupportMap s = compute_support(g);
    long total = 0;
    for (const auto& [e, v] : s.support) total += v;
    CHECK(total % 3 == 0);
}

TEST_CASE("support on the fixture graph") {
    Graph g = fig2_graph();
    SupportMap s = compute_support(g);
    CHECK(s.at(Edge(3, 6)) == 3);  // three triangles through this edge
    CHECK(s.at(Edge(8, 10)) == 0); // the support-0 edge
    CHECK(s.at(Edge(0, 1)) == 3);  // inside the 5-clique
    CHECK(s.at(Edge(5, 7)) == 3);  // 4-clique edge, plus one outside apex
    CHECK_THROWS_AS(s.at(Edge(0, 11)), not_found_error);
}

TEST_CASE("triangle enumeration lists each triangle once") {
    Graph g = fig2_graph();
    auto tris = enumerate_triangles_of_edge(g, Edge(3, 6));
    REQUIRE(tris.size() == 3);
    CHECK(std::is_sorted(tris.begin(), tris.end()));
    CHECK(std::adjacent_find(tris.begin(), tris.end()) == tris.end());
    for (const Triangle& t : tris) {
        CHECK(g.has_edge(t.a, t.b));
        CHECK(g.has_edge(t.b, t.c));
        CHECK(g.has_edge(t.a, t.c));
    }
    CHECK_THROWS_AS(enumerate_triangles_of_edge(g, Edge(0, 11)),
                    not_found_error);
}

TEST_CASE("probe counters include initialization and differ by strategy") {
    Graph g = generate_hub_graph(200, 400, 5);
    ProbeCount hash = 0, merge = 0;
    compute_support(g, &hash);
    compute_support_merge(g, &merge);
    CHECK(hash > 0);
    CHECK(merge > 0);
    // The merge walks both full neighbor lists of the hub for every hub
    // edge; the hash strategy iterates the smaller endpoint.
    CHECK(hash < merge);
}

TEST_CASE("peel order pops edges in nondecreasing support") {
    Graph g = generate_erdos_renyi(50, 0.25, 4);
    SupportMap s = compute_support(g);
    PeelOrder order(s);
    REQUIRE(order.audit().empty());
    int last = -1;
    std::size_t popped = 0;
    while (!order.empty()) {
        int cur = order.min_support();
        CHECK(cur >= last);
        last = cur;
        order.pop();
        ++popped;
    }
    CHECK(popped == g.m());
}

TEST_CASE("peel order stays consistent under randomized decrements") {
    Graph g = generate_erdos_renyi(40, 0.3, 12);
    SupportMap s = compute_support(g);
    PeelOrder order(s);
    std::mt19937_64 rng(99);
    std::size_t steps = 0;
    while (!order.empty() && steps < 500) {
        ++steps;
        // Decrement a random alive edge with positive support, or pop.
        std::vector<Edge> alive;
        for (const Edge& e : order.array())
            if (order.alive(e) && order.support(e) > 0) alive.push_back(e);
        if (!alive.empty() && (rng() & 1)) {
            const Edge& pick = alive[rng() % alive.size()];
            int before = order.support(pick);
            order.decrement(pick);
            CHECK(order.support(pick) == before - 1);
        } else {
            Edge e = order.pop();
            CHECK_FALSE(order.alive(e));
        }
        REQUIRE(order.audit().empty());
    }
}

TEST_CASE("support dump is canonical") {
    Graph g;
    g.add_edge(2, 1);
    g.add_edge(0, 2);
    g.add_edge(0, 1);
    SupportMap s = compute_support(g);
    std::ostringstream out;
    dump_support(out, s);
    CHECK(out.str() == "0 1 1\n0 2 1\n1 2 1\n");
}
