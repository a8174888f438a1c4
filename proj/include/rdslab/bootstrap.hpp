#pragma once

#include <cstdint>
#include <vector>

#include "rdslab/estimators.hpp"
#include "rdslab/sampler.hpp"

namespace rdslab {

// The trait-chain bootstrap: replicates are grown as a two-state Markov
// chain on {A, B} with the observed recruitment matrix as transition rows,
// drawing each member uniformly (with replacement) from the original
// sample's records of the current trait. Intervals are pure percentile
// ("middle" fraction of the ordered replicate estimates).
struct BootstrapConfig {
    enum class Estimator { VhOut, VhM };

    std::uint32_t replicates = 1000;
    std::vector<double> levels = {0.90, 0.95};
    Estimator estimator = Estimator::VhM;
    double m = 1.0;  // used by VhM
    std::uint64_t rng_seed = 1;
};

struct ConfidenceInterval {
    double level, lower, upper;
};

struct BootstrapResult {
    double point_estimate = 0;
    std::vector<ConfidenceInterval> intervals;
    std::vector<double> replicate_estimates;  // sorted; intervals are its order statistics
    std::uint32_t skipped_replicates = 0;
};

BootstrapResult bootstrap_ci(const RdsSample& s, const BootstrapConfig& cfg);

struct CoverageResult {
    std::vector<double> levels;
    std::vector<double> coverage;  // fraction of intervals containing true_p
    std::uint32_t failed_replications = 0;
};

/// Outer Monte-Carlo loop: draws outer_reps independent RDS samples from g,
/// builds a bootstrap interval for each, and reports how often the true
/// proportion is covered per level. Replications run concurrently with
/// deterministic per-replication substreams.
CoverageResult coverage_study(const DirectedGraph& g, const SamplerConfig& sampler_cfg,
                              const BootstrapConfig& bootstrap_cfg, std::uint32_t outer_reps,
                              double true_p);

}  // namespace rdslab
