#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "rdslab/graph.hpp"
#include "rdslab/rng.hpp"

namespace rdslab {

enum class NetFamily { Net1, Net2, Net3 };

NetFamily family_from_string(const std::string& s);
std::string to_string(NetFamily f);

// Declarative description of one generated network.
//
// Net1: pure-directed base rewired down to the directedness target (or a
// separate undirected construction when the target is 0), then traits
// swapped to the attractivity target. Indegree and outdegree stay
// uncorrelated.
// Net2: undirected base rewired up to the directedness target (which leaves
// an in/out correlation of about 1 - lambda), traits as Net1, then a
// degree-preserving homophily rewire.
// Net3: an existing traited graph rewired toward an indegree-assortativity
// target while keeping every node's degree pair, the trait assignment and
// the homophily fixed.
struct GenTarget {
    std::string id;
    NetFamily family = NetFamily::Net1;
    std::uint32_t node_count = 0;
    double mean_degree = 0;
    double directedness_target = 1.0;
    double attractivity_target = 1.0;
    double proportion_a = 0.5;
    std::optional<double> homophily_target;      // Net2 only
    std::optional<double> assortativity_target;  // Net3 only
    std::uint64_t rng_seed = 1;
    int max_restarts = 20;

    void validate() const;  // throws std::invalid_argument with the reason
};

// Cumulative accounting for one generation; rewire step counts back the
// degree-preservation property tests and land in the netgen CLI sidecar.
struct RewireStats {
    std::uint64_t directedness_steps = 0;
    std::uint64_t trait_swaps = 0;
    std::uint64_t homophily_steps = 0;
    std::uint64_t assortativity_steps = 0;
    int restarts = 0;
};

/// Random simple digraph with round(n * mean_degree) edges and no reciprocal
/// pair anywhere (directedness exactly 1). Throws when the density is
/// infeasible under the no-reciprocal constraint.
DirectedGraph gen_random_directed(std::uint32_t n, double mean_degree, Rng& rng);

/// Random graph of n * mean_degree / 2 reciprocal pairs (directedness 0,
/// every node with equal in- and outdegree). n * mean_degree must be an even
/// integer.
DirectedGraph gen_random_undirected(std::uint32_t n, double mean_degree, Rng& rng);

/// Net1 step 2: converts unreciprocated edges into reciprocal pairs by the
/// four-node rewire that keeps every node's (indegree, outdegree) pair,
/// until directedness reaches lambda_target in [0.2, 1].
void reduce_directedness_net1(DirectedGraph& g, double lambda_target, Rng& rng,
                              RewireStats* stats = nullptr);

/// Net2 step 2: repeatedly moves one direction of a reciprocal pair onto an
/// unconnected node pair, preserving the edge count, until directedness
/// reaches lambda_target.
void increase_directedness_net2(DirectedGraph& g, double lambda_target, Rng& rng,
                                RewireStats* stats = nullptr);

/// Assigns floor(n * proportion_a) nodes trait A uniformly at random, then
/// swaps cross-trait node pairs until the measured attractivity ratio is
/// within 0.01 of the target. Edges are untouched.
void assign_traits_attractivity(DirectedGraph& g, double proportion_a, double m_target, Rng& rng,
                                RewireStats* stats = nullptr);

/// Net2 step 4: degree- and directedness-preserving rewire of same-group
/// edge pairs into cross-group ones (or back) until homophily h_A is within
/// tolerance of h_target.
void rewire_homophily(DirectedGraph& g, double h_target, Rng& rng, RewireStats* stats = nullptr);

/// Net3 step 2: two-edge target swaps accepted when the source/target pick
/// pairs the two largest (or two smallest) endpoint indegrees together and
/// the swapped targets carry the same trait, so indegree assortativity can
/// only grow while degrees and homophily stay fixed.
void rewire_assortativity_net3(DirectedGraph& g, double gamma_target, Rng& rng,
                               RewireStats* stats = nullptr);

/// Full Net1/Net2 pipeline with strong-connectivity restarts (fresh rng
/// substream per attempt, bounded by max_restarts).
DirectedGraph generate(const GenTarget& target, RewireStats* stats = nullptr);

/// Net3 pipeline on a caller-supplied traited base graph.
DirectedGraph generate_net3(const DirectedGraph& base, const GenTarget& target,
                            RewireStats* stats = nullptr);

}  // namespace rdslab
