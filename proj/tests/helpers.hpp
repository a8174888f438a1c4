#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "rdslab/graph.hpp"
#include "rdslab/rng.hpp"

namespace test {

inline rdslab::DirectedGraph make_graph(std::uint32_t n,
                                        std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> edges,
                                        const std::string& traits = "") {
    rdslab::DirectedGraph g(n);
    for (auto [u, v] : edges) g.add_edge(u, v);
    if (!traits.empty()) {
        std::vector<rdslab::Trait> t;
        for (char c : traits) t.push_back(rdslab::trait_from_char(c));
        g.assign_traits(std::move(t));
    }
    return g;
}

// Uniform random simple digraph, optionally avoiding reciprocal edges;
// independent of the netgen module so graph/metric tests stand alone.
inline rdslab::DirectedGraph random_graph(std::uint32_t n, std::size_t edge_count, std::uint64_t seed,
                                          bool allow_reciprocal = true) {
    rdslab::DirectedGraph g(n);
    rdslab::Rng rng(seed);
    while (g.edge_count() < edge_count) {
        const auto u = static_cast<std::uint32_t>(rng.below(n));
        const auto v = static_cast<std::uint32_t>(rng.below(n));
        if (u == v || g.has_edge(u, v)) continue;
        if (!allow_reciprocal && g.has_edge(v, u)) continue;
        g.add_edge(u, v);
    }
    return g;
}

inline void random_traits(rdslab::DirectedGraph& g, double p_a, std::uint64_t seed) {
    rdslab::Rng rng(seed);
    std::vector<rdslab::Trait> t(g.node_count());
    for (auto& x : t) x = rng.next_double() < p_a ? rdslab::Trait::A : rdslab::Trait::B;
    g.assign_traits(std::move(t));
}

// Fully reciprocated closure: adds the reverse of every edge.
inline rdslab::DirectedGraph closure(const rdslab::DirectedGraph& g) {
    rdslab::DirectedGraph c(g.node_count());
    for (const auto& e : g.edges()) {
        c.add_edge(e.from, e.to);
        if (!c.has_edge(e.to, e.from)) c.add_edge(e.to, e.from);
    }
    if (g.has_traits()) {
        std::vector<rdslab::Trait> t;
        for (std::uint32_t v = 0; v < g.node_count(); ++v) t.push_back(g.trait(v));
        c.assign_traits(std::move(t));
    }
    return c;
}

}  // namespace test
