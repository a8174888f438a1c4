#include "rdslab/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <set>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "rdslab/metrics.hpp"

using namespace rdslab;

TEST_CASE("graph: edge bookkeeping and reciprocity queries") {
    DirectedGraph g(4);
    CHECK(g.add_edge(0, 1));
    CHECK(g.add_edge(1, 0));
    CHECK(g.add_edge(1, 2));
    CHECK_FALSE(g.add_edge(1, 2));  // duplicate ordered pair
    CHECK_THROWS_AS(g.add_edge(2, 2), std::invalid_argument);
    CHECK(g.edge_count() == 3);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(1, 0));
    CHECK_FALSE(g.has_edge(2, 1));
    CHECK(g.out_degree(1) == 2);
    CHECK(g.in_degree(1) == 1);

    g.remove_edge(1, 0);
    CHECK_FALSE(g.has_edge(1, 0));
    CHECK(g.edge_count() == 2);
    CHECK(g.out_degree(1) == 1);
    CHECK_THROWS_AS(g.remove_edge(1, 0), std::invalid_argument);
}

TEST_CASE("graph: load parses edges and traits") {
    std::istringstream edges("# comment\n0 1\n1 0\n1 2\n");
    std::istringstream traits("0 A\n1 A\n2 B\n");
    const DirectedGraph g = load_graph(edges, traits);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g.trait(0) == Trait::A);
    CHECK(g.trait(2) == Trait::B);
    CHECK(directedness(g) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("graph: load rejects bad input") {
    SUBCASE("empty edge stream") {
        std::istringstream edges(""), traits("");
        CHECK_THROWS_WITH_AS(load_graph(edges, traits), doctest::Contains("empty graph"),
                             std::runtime_error);
    }
    SUBCASE("malformed line reports the line number") {
        std::istringstream edges("0 1\nnot an edge\n"), traits("0 A\n1 B\n");
        CHECK_THROWS_WITH_AS(load_graph(edges, traits), doctest::Contains("line 2"),
                             std::runtime_error);
    }
    SUBCASE("self-loop") {
        std::istringstream edges("0 0\n"), traits("0 A\n");
        CHECK_THROWS_AS(load_graph(edges, traits), std::runtime_error);
    }
    SUBCASE("duplicate ordered pair") {
        std::istringstream edges("0 1\n0 1\n"), traits("0 A\n1 B\n");
        CHECK_THROWS_WITH_AS(load_graph(edges, traits), doctest::Contains("duplicate"),
                             std::runtime_error);
    }
    SUBCASE("missing trait") {
        std::istringstream edges("0 1\n1 0\n"), traits("0 A\n");
        CHECK_THROWS_WITH_AS(load_graph(edges, traits), doctest::Contains("missing trait"),
                             std::runtime_error);
    }
    SUBCASE("trait for unknown node") {
        std::istringstream edges("0 1\n1 0\n"), traits("0 A\n1 B\n7 A\n");
        CHECK_THROWS_WITH_AS(load_graph(edges, traits), doctest::Contains("unknown node"),
                             std::runtime_error);
    }
}

TEST_CASE("graph: non-contiguous labels are remapped and preserved on save") {
    std::istringstream edges("10 20\n20 30\n30 10\n");
    std::istringstream traits("10 A\n20 B\n30 B\n");
    const DirectedGraph g = load_graph(edges, traits);
    CHECK(g.node_count() == 3);
    CHECK(g.label_of(0) == 10);
    CHECK(g.label_of(2) == 30);

    std::ostringstream edges_out, traits_out;
    save_graph(g, edges_out, traits_out);
    CHECK(edges_out.str() == "10 20\n20 30\n30 10\n");
    CHECK(traits_out.str() == "10 A\n20 B\n30 B\n");
}

TEST_CASE("graph: save/load round-trip preserves edges and traits") {
    DirectedGraph g = test::random_graph(50, 300, 99);
    test::random_traits(g, 0.4, 7);

    std::ostringstream edges_out, traits_out;
    save_graph(g, edges_out, traits_out);
    std::istringstream edges_in(edges_out.str()), traits_in(traits_out.str());
    const DirectedGraph h = load_graph(edges_in, traits_in);

    REQUIRE(h.node_count() == g.node_count());
    REQUIRE(h.edge_count() == g.edge_count());
    std::set<std::pair<std::uint32_t, std::uint32_t>> a, b;
    for (const auto& e : g.edges()) a.emplace(e.from, e.to);
    for (const auto& e : h.edges()) b.emplace(e.from, e.to);
    CHECK(a == b);
    for (std::uint32_t v = 0; v < g.node_count(); ++v) CHECK(g.trait(v) == h.trait(v));
}

TEST_CASE("graph: strong connectivity") {
    CHECK(is_strongly_connected(test::make_graph(3, {{0, 1}, {1, 2}, {2, 0}})));
    CHECK_FALSE(is_strongly_connected(test::make_graph(3, {{0, 1}, {1, 2}})));
    CHECK_FALSE(is_strongly_connected(test::make_graph(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}})));

    // reachable from 0 but not back
    CHECK_FALSE(is_strongly_connected(test::make_graph(3, {{0, 1}, {1, 0}, {0, 2}})));
}

TEST_CASE("graph: degree sums equal the edge count") {
    const DirectedGraph g = test::random_graph(40, 200, 3);
    std::size_t in_sum = 0, out_sum = 0;
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        in_sum += g.in_degree(v);
        out_sum += g.out_degree(v);
    }
    CHECK(in_sum == g.edge_count());
    CHECK(out_sum == g.edge_count());
}
