#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rdslab/netgen.hpp"
#include "rdslab/sampler.hpp"

namespace rdslab {

// One estimator of the battery, with its auxiliary inputs resolved per
// graph: m may be pinned or taken from the generated network's population
// attractivity ratio; the SS population size defaults to the graph size.
struct EstimatorSpec {
    std::string name;  // naive vh_out vh_in vh_m sh_out sh_in sh_m eig ss_out ss_in
    std::optional<double> m;                       // vh_m / sh_m; empty = population m*
    std::optional<std::uint64_t> population_size;  // ss_*; empty = graph size
    std::uint32_t ss_draws = 500;
    std::uint32_t ss_rounds = 3;
};

struct TargetSpec {
    GenTarget target;
    std::string base_edges, base_traits;  // net3 base graph files
};

struct ExperimentConfig {
    std::vector<TargetSpec> targets;
    SamplerConfig sampler;
    std::vector<EstimatorSpec> battery;
    std::uint32_t replications = 1;
    std::uint64_t master_seed = 1;
    std::string output_path;
    bool regenerate_graph_per_replication = false;
};

ExperimentConfig load_experiment_config(std::istream& in);  // documented JSON schema
std::string config_hash(const ExperimentConfig& cfg);       // canonical-serialization FNV-1a

struct SummaryRow {
    std::string target_id;
    std::string estimator;
    std::string params;  // "m=1.2" / "N=10000,M=500,r=3" / ""
    double bias = 0;
    double sd = 0;    // population form, so rmse^2 = bias^2 + sd^2 exactly
    double rmse = 0;
    std::uint32_t failures = 0;
    double true_p = 0;
    bool flagged = false;  // more than 5% of replications failed
};

struct SummaryTable {
    std::vector<SummaryRow> rows;
    std::uint64_t master_seed = 0;
    std::string hash;
};

/// For each target: generate the network (once, shared across replications,
/// unless per-replication regeneration is requested), run independent RDS
/// replications with derived rng substreams, evaluate the whole battery on
/// each, and aggregate bias / SD / RMSE against the network's true
/// proportion. Failed estimator calls are counted and excluded.
SummaryTable run_experiment(const ExperimentConfig& cfg);

void emit_csv(const SummaryTable& table, std::ostream& out);
void emit_json(const SummaryTable& table, std::ostream& out);
SummaryTable read_summary_csv(std::istream& in);

}  // namespace rdslab
