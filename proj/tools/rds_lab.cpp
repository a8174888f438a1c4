// rds-lab: generate networks, simulate RDS, estimate population proportions,
// run sensitivity sweeps and full Monte-Carlo experiments.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rdslab/bootstrap.hpp"
#include "rdslab/estimators.hpp"
#include "rdslab/experiment.hpp"
#include "rdslab/graph.hpp"
#include "rdslab/metrics.hpp"
#include "rdslab/netgen.hpp"
#include "rdslab/sampler.hpp"
#include "rdslab/sensitivity.hpp"

namespace {

using nlohmann::json;

std::ifstream open_or_die(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return f;
}

rdslab::DirectedGraph load_graph_files(const std::string& edges, const std::string& traits) {
    auto e = open_or_die(edges);
    auto t = open_or_die(traits);
    return rdslab::load_graph(e, t);
}

json metrics_json(const rdslab::GraphMetrics& m) {
    return {{"directedness", m.directedness},
            {"indegree_assortativity", m.indegree_assortativity},
            {"in_out_correlation", m.in_out_correlation},
            {"homophily_a", m.homophily_a},
            {"attractivity", m.attractivity},
            {"activity", m.activity},
            {"proportion_a", m.proportion_a}};
}

int cmd_netgen(const std::string& family, std::uint32_t nodes, double mean_degree,
               double directedness, double attractivity, double proportion_a,
               std::optional<double> homophily, std::optional<double> assortativity,
               const std::string& base_edges, const std::string& base_traits, std::uint64_t seed,
               int max_restarts, const std::string& out_prefix) {
    rdslab::GenTarget target;
    target.id = out_prefix;
    target.family = rdslab::family_from_string(family);
    target.node_count = nodes;
    target.mean_degree = mean_degree;
    target.directedness_target = directedness;
    target.attractivity_target = attractivity;
    target.proportion_a = proportion_a;
    target.homophily_target = homophily;
    target.assortativity_target = assortativity;
    target.rng_seed = seed;
    target.max_restarts = max_restarts;

    rdslab::RewireStats stats;
    rdslab::DirectedGraph g;
    if (target.family == rdslab::NetFamily::Net3) {
        if (base_edges.empty() || base_traits.empty())
            throw std::runtime_error("net3 needs --base-edges and --base-traits");
        g = rdslab::generate_net3(load_graph_files(base_edges, base_traits), target, &stats);
    } else {
        g = rdslab::generate(target, &stats);
    }

    std::ofstream edges(out_prefix + ".edges"), traits(out_prefix + ".traits");
    if (!edges || !traits) throw std::runtime_error("cannot write outputs under prefix " + out_prefix);
    rdslab::save_graph(g, edges, traits);

    json sidecar;
    sidecar["target"] = {{"family", rdslab::to_string(target.family)},
                         {"nodes", g.node_count()},
                         {"mean_degree", mean_degree},
                         {"directedness", directedness},
                         {"attractivity", attractivity},
                         {"proportion_a", proportion_a},
                         {"seed", seed},
                         {"max_restarts", max_restarts}};
    if (homophily) sidecar["target"]["homophily"] = *homophily;
    if (assortativity) sidecar["target"]["assortativity"] = *assortativity;
    sidecar["measured"] = metrics_json(rdslab::compute_metrics(g));
    sidecar["measured"]["nodes"] = g.node_count();
    sidecar["measured"]["edges"] = g.edge_count();
    sidecar["stats"] = {{"directedness_steps", stats.directedness_steps},
                        {"trait_swaps", stats.trait_swaps},
                        {"homophily_steps", stats.homophily_steps},
                        {"assortativity_steps", stats.assortativity_steps},
                        {"restarts", stats.restarts}};
    std::ofstream side(out_prefix + ".json");
    side << sidecar.dump(2) << '\n';
    std::cout << sidecar.dump(2) << std::endl;
    return 0;
}

int cmd_sample(const std::string& edges, const std::string& traits, const rdslab::SamplerConfig& cfg,
               const std::string& out_path) {
    const rdslab::DirectedGraph g = load_graph_files(edges, traits);
    const rdslab::RdsSample s = rdslab::run_rds(g, cfg);
    if (out_path.empty()) {
        rdslab::write_sample_csv(s, std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        rdslab::write_sample_csv(s, out);
    }
    return 0;
}

int cmd_estimate(const std::string& sample_path, const std::string& estimator, double m,
                 std::uint64_t population_size, std::uint32_t ss_draws, std::uint32_t ss_rounds,
                 const std::string& edges, const std::string& traits, std::uint32_t bootstrap,
                 std::vector<double> levels, std::uint64_t seed) {
    auto f = open_or_die(sample_path);
    const rdslab::RdsSample s = rdslab::ingest_sample(f);

    rdslab::EstimatorResult r;
    if (estimator == "naive") r = rdslab::naive_estimate(s);
    else if (estimator == "vh_out") r = rdslab::vh_out(s);
    else if (estimator == "vh_in") r = rdslab::vh_in(s);
    else if (estimator == "vh_m") r = rdslab::vh_m(s, m);
    else if (estimator == "sh_out") r = rdslab::sh_out(s);
    else if (estimator == "sh_in") r = rdslab::sh_in(s);
    else if (estimator == "sh_m") r = rdslab::sh_m(s, m);
    else if (estimator == "ss_out" || estimator == "ss_in") {
        if (population_size == 0)
            throw std::runtime_error("ss estimators need --population-size");
        r = rdslab::ss_estimator(s, population_size,
                                 estimator == "ss_out" ? rdslab::DegreeSource::Out
                                                       : rdslab::DegreeSource::In,
                                 ss_draws, ss_rounds);
    } else if (estimator == "eig") {
        if (edges.empty() || traits.empty())
            throw std::runtime_error("eig needs the full graph: --edges and --traits");
        const rdslab::DirectedGraph g = load_graph_files(edges, traits);
        const rdslab::StationaryDistribution pi = rdslab::stationary_distribution(g);
        r = rdslab::eig_estimator(s, pi);
    } else {
        throw std::runtime_error("unknown estimator '" + estimator + "'");
    }

    json out = {{"name", r.name}, {"estimate", r.estimate}, {"params", r.params}};
    if (bootstrap > 0) {
        rdslab::BootstrapConfig bc;
        bc.replicates = bootstrap;
        if (!levels.empty()) bc.levels = levels;
        bc.rng_seed = seed;
        if (estimator == "vh_out") {
            bc.estimator = rdslab::BootstrapConfig::Estimator::VhOut;
        } else if (estimator == "vh_m") {
            bc.estimator = rdslab::BootstrapConfig::Estimator::VhM;
            bc.m = m;
        } else {
            throw std::runtime_error("bootstrap intervals support vh_out and vh_m only");
        }
        const rdslab::BootstrapResult br = rdslab::bootstrap_ci(s, bc);
        json intervals = json::array();
        for (const auto& ci : br.intervals)
            intervals.push_back({{"level", ci.level}, {"lower", ci.lower}, {"upper", ci.upper}});
        out["bootstrap"] = {{"replicates", bootstrap},
                            {"skipped", br.skipped_replicates},
                            {"intervals", intervals}};
    }
    std::cout << out.dump(2) << std::endl;
    return 0;
}

int cmd_sweep(const std::string& sample_path, double m_min, double m_max, std::uint32_t steps,
              std::uint32_t bootstrap, std::vector<double> levels, std::uint64_t seed,
              bool include_sh, const std::string& out_csv, const std::string& out_json) {
    auto f = open_or_die(sample_path);
    const rdslab::RdsSample s = rdslab::ingest_sample(f);
    std::optional<rdslab::BootstrapConfig> bc;
    if (bootstrap > 0) {
        bc.emplace();
        bc->replicates = bootstrap;
        if (!levels.empty()) bc->levels = {levels.front()};
        bc->rng_seed = seed;
    }
    const rdslab::SensitivityCurve curve = rdslab::sensitivity_sweep(s, m_min, m_max, steps, bc, include_sh);
    if (!out_csv.empty()) {
        std::ofstream out(out_csv);
        if (!out) throw std::runtime_error("cannot write " + out_csv);
        rdslab::write_sweep_csv(curve, out);
    }
    if (!out_json.empty()) {
        std::ofstream out(out_json);
        if (!out) throw std::runtime_error("cannot write " + out_json);
        rdslab::write_sweep_json(curve, out);
    }
    if (out_csv.empty() && out_json.empty()) rdslab::write_sweep_csv(curve, std::cout);
    return 0;
}

int cmd_run(const std::string& config_path, const std::string& output_override,
            const std::string& format) {
    auto f = open_or_die(config_path);
    rdslab::ExperimentConfig cfg = rdslab::load_experiment_config(f);
    if (!output_override.empty()) cfg.output_path = output_override;
    const rdslab::SummaryTable table = rdslab::run_experiment(cfg);
    if (cfg.output_path.empty()) {
        format == "json" ? rdslab::emit_json(table, std::cout) : rdslab::emit_csv(table, std::cout);
        return 0;
    }
    std::ofstream out(cfg.output_path);
    if (!out) throw std::runtime_error("cannot write " + cfg.output_path);
    const bool json_out =
        format == "json" || (format.empty() && cfg.output_path.size() > 5 &&
                             cfg.output_path.substr(cfg.output_path.size() - 5) == ".json");
    json_out ? rdslab::emit_json(table, out) : rdslab::emit_csv(table, out);
    std::cerr << "wrote " << table.rows.size() << " rows to " << cfg.output_path << std::endl;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RDS on partially directed networks: simulation and estimation toolkit"};
    app.require_subcommand(1);

    // netgen
    std::string family, out_prefix, base_edges, base_traits;
    std::uint32_t nodes = 10000;
    double mean_degree = 10, lambda = 1.0, m_star = 1.0, p_a = 0.7;
    std::optional<double> homophily, assortativity;
    std::uint64_t seed = 1;
    int max_restarts = 20;
    auto* netgen = app.add_subcommand("netgen", "generate a network family instance");
    netgen->add_option("--family", family, "net1 | net2 | net3")->required();
    netgen->add_option("--nodes", nodes, "node count");
    netgen->add_option("--mean-degree", mean_degree, "mean degree");
    netgen->add_option("--directedness", lambda, "directedness target");
    netgen->add_option("--attractivity", m_star, "attractivity ratio target");
    netgen->add_option("--proportion-a", p_a, "fraction of nodes with trait A");
    netgen->add_option("--homophily", homophily, "homophily target (net2)");
    netgen->add_option("--assortativity", assortativity, "indegree assortativity target (net3)");
    netgen->add_option("--base-edges", base_edges, "net3 base edge list");
    netgen->add_option("--base-traits", base_traits, "net3 base trait file");
    netgen->add_option("--seed", seed, "rng seed");
    netgen->add_option("--max-restarts", max_restarts, "connectivity restart budget");
    netgen->add_option("--out", out_prefix, "output prefix (.edges/.traits/.json)")->required();

    // sample
    std::string s_edges, s_traits, s_out;
    rdslab::SamplerConfig sampler_cfg;
    auto* sample = app.add_subcommand("sample", "simulate one RDS sample and emit its CSV");
    sample->add_option("--edges", s_edges, "edge list file")->required();
    sample->add_option("--traits", s_traits, "trait file")->required();
    sample->add_option("--seeds", sampler_cfg.seed_count, "number of seeds");
    sample->add_option("--coupons", sampler_cfg.coupons_per_respondent, "coupons per respondent");
    sample->add_option("--size", sampler_cfg.target_sample_size, "sample size");
    sample->add_flag("--with-replacement", sampler_cfg.with_replacement, "sample with replacement");
    sample->add_option("--seed", sampler_cfg.rng_seed, "rng seed");
    sample->add_option("--out", s_out, "output csv (default stdout)");

    // estimate
    std::string e_sample, e_name, e_edges, e_traits;
    double e_m = 1.0;
    std::uint64_t e_n = 0;
    std::uint32_t e_ss_draws = 500, e_ss_rounds = 3, e_bootstrap = 0;
    std::vector<double> e_levels;
    std::uint64_t e_seed = 1;
    auto* estimate = app.add_subcommand("estimate", "run one estimator on a sample csv");
    estimate->add_option("--sample", e_sample, "sample csv")->required();
    estimate->add_option("--estimator", e_name,
                         "naive vh_out vh_in vh_m sh_out sh_in sh_m eig ss_out ss_in")
        ->required();
    estimate->add_option("--m", e_m, "attractivity ratio for vh_m / sh_m");
    estimate->add_option("--population-size", e_n, "population size for ss estimators");
    estimate->add_option("--ss-draws", e_ss_draws, "successive-sampling simulations per round");
    estimate->add_option("--ss-rounds", e_ss_rounds, "successive-sampling rounds");
    estimate->add_option("--edges", e_edges, "graph edge list (eig only)");
    estimate->add_option("--traits", e_traits, "graph trait file (eig only)");
    estimate->add_option("--bootstrap", e_bootstrap, "bootstrap replicates (vh_out / vh_m)");
    estimate->add_option("--level", e_levels, "confidence level(s), e.g. 0.90 0.95");
    estimate->add_option("--seed", e_seed, "bootstrap rng seed");

    // sweep
    std::string w_sample, w_csv, w_json;
    double w_min = 0.5, w_max = 1.5;
    std::uint32_t w_steps = 15, w_bootstrap = 0;
    std::vector<double> w_levels;
    std::uint64_t w_seed = 1;
    bool w_sh = false;
    auto* sweep = app.add_subcommand("sweep", "sensitivity sweep of vh_m over a range of m");
    sweep->add_option("--sample", w_sample, "sample csv")->required();
    sweep->add_option("--m-min", w_min, "lower end of the m range")->required();
    sweep->add_option("--m-max", w_max, "upper end of the m range")->required();
    sweep->add_option("--steps", w_steps, "grid points (inclusive endpoints)");
    sweep->add_option("--bootstrap", w_bootstrap, "bootstrap replicates per grid point");
    sweep->add_option("--level", w_levels, "confidence level for the sweep CI");
    sweep->add_option("--seed", w_seed, "bootstrap rng seed");
    sweep->add_flag("--include-sh", w_sh, "also evaluate sh_m per grid point");
    sweep->add_option("--out", w_csv, "output csv (default stdout)");
    sweep->add_option("--json", w_json, "output json");

    // run
    std::string r_config, r_output, r_format;
    auto* run = app.add_subcommand("run", "run a Monte-Carlo experiment from a JSON config");
    run->add_option("--config", r_config, "experiment config json")->required();
    run->add_option("--output", r_output, "override the config's output path");
    run->add_option("--format", r_format, "csv | json (default: by output extension)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (netgen->parsed())
            return cmd_netgen(family, nodes, mean_degree, lambda, m_star, p_a, homophily,
                              assortativity, base_edges, base_traits, seed, max_restarts, out_prefix);
        if (sample->parsed()) return cmd_sample(s_edges, s_traits, sampler_cfg, s_out);
        if (estimate->parsed())
            return cmd_estimate(e_sample, e_name, e_m, e_n, e_ss_draws, e_ss_rounds, e_edges,
                                e_traits, e_bootstrap, e_levels, e_seed);
        if (sweep->parsed())
            return cmd_sweep(w_sample, w_min, w_max, w_steps, w_bootstrap, w_levels, w_seed, w_sh,
                             w_csv, w_json);
        if (run->parsed()) return cmd_run(r_config, r_output, r_format);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
