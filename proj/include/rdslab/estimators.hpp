#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rdslab/graph.hpp"
#include "rdslab/metrics.hpp"
#include "rdslab/sampler.hpp"

namespace rdslab {

struct EstimatorResult {
    std::string name;
    double estimate = 0;  // always in [0, 1]; the producing call throws otherwise
    std::map<std::string, double> params;
};

enum class DegreeSource { Out, In };
enum class MeanKind { Harmonic, Arithmetic };

/// Raw sample composition n_A / n.
EstimatorResult naive_estimate(const RdsSample& s);

/// Inverse-outdegree weighted proportion (the standard RDS estimator).
EstimatorResult vh_out(const RdsSample& s);

/// Same weighting with indegrees; needs oracle indegree knowledge, so it is
/// only usable on simulated samples.
EstimatorResult vh_in(const RdsSample& s);

/// (n_A/n_B) / (n_A/n_B + m): the indegree-ratio estimator with the ratio
/// supplied as prior knowledge. Strictly decreasing in m; m = 1 reduces to
/// the sample composition.
EstimatorResult vh_m(const RdsSample& s, double m);

/// Salganik-Heckathorn estimator from the observed recruitment matrix and
/// harmonic mean outdegrees.
EstimatorResult sh_out(const RdsSample& s);

/// Positive root of the degree-sum balance quadratic relating the group size
/// ratio phi = N_A/N_B to the recruitment matrix and the degree ratios.
/// Throws when S_AB = 0.
double solve_phi(const RecruitmentMatrix& s, double m, double w);

/// SH generalization for directed networks: phi_hat/(1 + phi_hat) with the
/// indegree ratio estimated from the sample (sh_in) or supplied (sh_m); the
/// activity ratio w* always comes from the sample.
EstimatorResult sh_in(const RdsSample& s, MeanKind w_kind = MeanKind::Harmonic);
EstimatorResult sh_m(const RdsSample& s, double m, MeanKind w_kind = MeanKind::Harmonic);

struct StationaryDistribution {
    std::vector<double> probabilities;  // positive, summing to 1
};

/// Equilibrium distribution of the recruitment random walk (left Perron
/// vector of the row-normalized adjacency). Power iteration from the uniform
/// vector until the successive-iterate L1 difference drops below tol; on
/// non-convergence (near-periodic structure) retries once as a lazy walk
/// with damping 0.999, which has the same fixed point.
StationaryDistribution stationary_distribution(const DirectedGraph& g, double tol = 1e-12,
                                               int max_iterations = 100000);

/// Hansen-Hurwitz estimator with exact inclusion probabilities (simulation
/// oracle; requires the full graph). Computed for any sample, but its
/// unbiasedness argument assumes with-replacement draws.
EstimatorResult eig_estimator(const RdsSample& s, const StationaryDistribution& pi);

// Mean-field approximation of the walk's equilibrium over degree classes
// K = (k_in, k_out): pi_bar(K) = k_in * sum_K' f_{K'|K} / k'_out * pi_bar(K'),
// normalized so that N * sum_K f_K * pi_bar(K) = 1.
struct DegreeClassTable {
    struct Entry {
        std::uint32_t k_in, k_out;
        std::uint32_t members;
        double fraction;  // f_K
        double pi_bar;
    };
    std::vector<Entry> classes;
    double mean_indegree = 0;  // K-bar_in = E/N

    /// Closed form for degree-uncorrelated networks: k_in / (N * K-bar_in).
    double pi_bar_uncorrelated(std::uint32_t k_in, std::uint32_t node_count) const {
        return k_in / (static_cast<double>(node_count) * mean_indegree);
    }
};

DegreeClassTable mean_field_pi(const DirectedGraph& g, double tol = 1e-10, int max_iterations = 100000);

/// Successive-sampling estimator (requires the population size): r rounds of
/// [estimate population degree counts from current inclusion probabilities,
/// then re-estimate the probabilities from m_draws simulated
/// without-replacement probability-proportional-to-degree samples of the
/// observed size]; the estimate weights records by the final reciprocal
/// inclusion probabilities. Deterministic for a fixed rng_seed.
EstimatorResult ss_estimator(const RdsSample& s, std::uint64_t population_size,
                             DegreeSource source = DegreeSource::Out, std::uint32_t m_draws = 500,
                             std::uint32_t rounds = 3, std::uint64_t rng_seed = 0x5353u);

/// Recruitee-outdegree weighted recruitment proportions (the Hansen-Hurwitz
/// style adjustment of the recruitment matrix). Kept for comparison; on the
/// benchmark networks it gives no improvement over the observed matrix.
RecruitmentMatrix adjusted_recruitment_matrix(const RdsSample& s);

}  // namespace rdslab
