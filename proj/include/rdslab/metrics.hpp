#pragma once

#include "rdslab/graph.hpp"

namespace rdslab {

// 2x2 row-stochastic matrix of cross-group edge (or recruitment) proportions.
// Row X gives where edges originating in group X end up.
struct RecruitmentMatrix {
    double aa = 0, ab = 0, ba = 0, bb = 0;
};

struct GroupDegreeRatios {
    double attractivity = 1;  // m* = mean indegree of A over mean indegree of B
    double activity = 1;      // w* = same ratio for outdegrees
};

struct GraphMetrics {
    double directedness;
    double indegree_assortativity;  // NaN when undefined (zero indegree variance)
    double in_out_correlation;      // NaN when undefined
    double homophily_a;
    double attractivity;
    double activity;
    double proportion_a;
};

/// Fraction of edges whose reverse edge is absent; 0 for a fully reciprocal
/// graph, 1 when no tie is reciprocated. Throws on edgeless graphs.
double directedness(const DirectedGraph& g);

/// Pearson-style assortativity of endpoint indegrees, summed over every
/// ordered edge with (source indegree, target indegree) as the pair.
/// Throws std::domain_error when the indegree variance over edge endpoints
/// is zero (the metric is undefined, which is distinct from 0).
double indegree_assortativity(const DirectedGraph& g);

/// Pearson correlation of (indegree, outdegree) over all nodes.
/// Throws std::domain_error when either degree sequence has zero variance.
double in_out_correlation(const DirectedGraph& g);

/// Edge-count recruitment matrix of the whole network. Throws if either
/// group has no outgoing edges (a row would be undefined).
RecruitmentMatrix true_recruitment_matrix(const DirectedGraph& g);

/// h_A = 1 - S_AB / p_B, the excess tendency of A-nodes to attach to A-nodes
/// beyond random mixing.
double homophily(const DirectedGraph& g);

/// Arithmetic-mean degree ratios of the two groups (population quantities;
/// the harmonic-mean sample analogues live with the estimators).
GroupDegreeRatios group_degree_ratios(const DirectedGraph& g);

double proportion_a(const DirectedGraph& g);

/// Full metric bundle; undefined correlation metrics come back as NaN here
/// instead of throwing so the bundle stays usable for reporting.
GraphMetrics compute_metrics(const DirectedGraph& g);

}  // namespace rdslab
