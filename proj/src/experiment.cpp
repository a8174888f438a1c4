#include "rdslab/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "rdslab/estimators.hpp"
#include "rdslab/metrics.hpp"
#include "rdslab/parallel.hpp"
#include "rdslab/rng.hpp"

#include "json.hpp"

namespace rdslab {

namespace {

using nlohmann::json;

const char* const known_estimators[] = {"naive", "vh_out", "vh_in", "vh_m", "sh_out",
                                        "sh_in", "sh_m",   "eig",   "ss_out", "ss_in"};

bool known_estimator(const std::string& name) {
    for (const char* k : known_estimators)
        if (name == k) return true;
    return false;
}

json to_json(const TargetSpec& t) {
    json j;
    j["id"] = t.target.id;
    j["family"] = to_string(t.target.family);
    if (t.target.family != NetFamily::Net3) {
        j["nodes"] = t.target.node_count;
        j["mean_degree"] = t.target.mean_degree;
        j["directedness"] = t.target.directedness_target;
        j["attractivity"] = t.target.attractivity_target;
        j["proportion_a"] = t.target.proportion_a;
        if (t.target.homophily_target) j["homophily"] = *t.target.homophily_target;
    } else {
        j["assortativity"] = *t.target.assortativity_target;
        j["base_edges"] = t.base_edges;
        j["base_traits"] = t.base_traits;
    }
    j["seed"] = t.target.rng_seed;
    j["max_restarts"] = t.target.max_restarts;
    return j;
}

json to_json(const ExperimentConfig& cfg) {
    json sampler = {{"seeds", cfg.sampler.seed_count},
                    {"coupons", cfg.sampler.coupons_per_respondent},
                    {"sample_size", cfg.sampler.target_sample_size},
                    {"with_replacement", cfg.sampler.with_replacement}};
    json targets = json::array();
    for (const auto& t : cfg.targets) targets.push_back(to_json(t));
    json battery = json::array();
    for (const auto& e : cfg.battery) {
        json je = {{"name", e.name}};
        if (e.m) je["m"] = *e.m;
        if (e.population_size) je["population_size"] = *e.population_size;
        if (e.name == "ss_out" || e.name == "ss_in") {
            je["ss_draws"] = e.ss_draws;
            je["ss_rounds"] = e.ss_rounds;
        }
        battery.push_back(std::move(je));
    }
    return json{{"master_seed", cfg.master_seed},
                {"replications", cfg.replications},
                {"regenerate_graph_per_replication", cfg.regenerate_graph_per_replication},
                {"output", cfg.output_path},
                {"sampler", sampler},
                {"targets", targets},
                {"estimators", battery}};
}

}  // namespace

ExperimentConfig load_experiment_config(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("experiment config: invalid JSON: ") + e.what());
    }
    ExperimentConfig cfg;
    cfg.master_seed = j.value("master_seed", 1ull);
    cfg.replications = j.value("replications", 1u);
    if (cfg.replications < 1) throw std::runtime_error("experiment config: replications must be >= 1");
    cfg.regenerate_graph_per_replication = j.value("regenerate_graph_per_replication", false);
    cfg.output_path = j.value("output", std::string());

    const json& s = j.at("sampler");
    cfg.sampler.seed_count = s.value("seeds", 10u);
    cfg.sampler.coupons_per_respondent = s.value("coupons", 3u);
    cfg.sampler.target_sample_size = s.at("sample_size").get<std::uint32_t>();
    cfg.sampler.with_replacement = s.value("with_replacement", false);

    std::size_t index = 0;
    for (const json& jt : j.at("targets")) {
        TargetSpec t;
        t.target.id = jt.value("id", "target" + std::to_string(index));
        t.target.family = family_from_string(jt.at("family").get<std::string>());
        if (t.target.family == NetFamily::Net3) {
            t.target.assortativity_target = jt.at("assortativity").get<double>();
            t.base_edges = jt.at("base_edges").get<std::string>();
            t.base_traits = jt.at("base_traits").get<std::string>();
        } else {
            t.target.node_count = jt.at("nodes").get<std::uint32_t>();
            t.target.mean_degree = jt.at("mean_degree").get<double>();
            t.target.directedness_target = jt.at("directedness").get<double>();
            t.target.attractivity_target = jt.value("attractivity", 1.0);
            t.target.proportion_a = jt.at("proportion_a").get<double>();
            if (jt.contains("homophily")) t.target.homophily_target = jt.at("homophily").get<double>();
        }
        t.target.rng_seed = jt.value("seed", 0ull);  // 0: derive from the master seed
        t.target.max_restarts = jt.value("max_restarts", 20);
        t.target.validate();
        cfg.targets.push_back(std::move(t));
        ++index;
    }
    if (cfg.targets.empty()) throw std::runtime_error("experiment config: no targets");

    for (const json& je : j.at("estimators")) {
        EstimatorSpec e;
        e.name = je.at("name").get<std::string>();
        if (!known_estimator(e.name))
            throw std::runtime_error("experiment config: unknown estimator '" + e.name + "'");
        if (je.contains("m") && !je.at("m").is_string()) e.m = je.at("m").get<double>();
        if (je.contains("population_size") && !je.at("population_size").is_string())
            e.population_size = je.at("population_size").get<std::uint64_t>();
        e.ss_draws = je.value("ss_draws", 500u);
        e.ss_rounds = je.value("ss_rounds", 3u);
        cfg.battery.push_back(std::move(e));
    }
    if (cfg.battery.empty()) throw std::runtime_error("experiment config: no estimators");
    return cfg;
}

std::string config_hash(const ExperimentConfig& cfg) {
    const std::string dump = to_json(cfg).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

DirectedGraph build_graph(const TargetSpec& spec, std::uint64_t seed) {
    GenTarget t = spec.target;
    t.rng_seed = seed;
    if (t.family != NetFamily::Net3) return generate(t);
    std::ifstream edges(spec.base_edges), traits(spec.base_traits);
    if (!edges) throw std::runtime_error("cannot open base edge list " + spec.base_edges);
    if (!traits) throw std::runtime_error("cannot open base trait file " + spec.base_traits);
    const DirectedGraph base = load_graph(edges, traits);
    return generate_net3(base, t);
}

std::string params_string(const EstimatorSpec& spec, double resolved_m, std::uint64_t resolved_n) {
    char buf[96];
    if (spec.name == "vh_m" || spec.name == "sh_m") {
        std::snprintf(buf, sizeof(buf), "m=%.6g", resolved_m);
        return buf;
    }
    if (spec.name == "ss_out" || spec.name == "ss_in") {
        std::snprintf(buf, sizeof(buf), "N=%llu,M=%u,r=%u",
                      static_cast<unsigned long long>(resolved_n), spec.ss_draws, spec.ss_rounds);
        return buf;
    }
    return "";
}

struct ResolvedSpec {
    EstimatorSpec spec;
    double m = 1;
    std::uint64_t n = 0;
    bool needs_pi = false;
};

double evaluate(const ResolvedSpec& rs, const RdsSample& sample, const StationaryDistribution* pi) {
    const std::string& name = rs.spec.name;
    if (name == "naive") return naive_estimate(sample).estimate;
    if (name == "vh_out") return vh_out(sample).estimate;
    if (name == "vh_in") return vh_in(sample).estimate;
    if (name == "vh_m") return vh_m(sample, rs.m).estimate;
    if (name == "sh_out") return sh_out(sample).estimate;
    if (name == "sh_in") return sh_in(sample).estimate;
    if (name == "sh_m") return sh_m(sample, rs.m).estimate;
    if (name == "eig") return eig_estimator(sample, *pi).estimate;
    if (name == "ss_out")
        return ss_estimator(sample, rs.n, DegreeSource::Out, rs.spec.ss_draws, rs.spec.ss_rounds).estimate;
    return ss_estimator(sample, rs.n, DegreeSource::In, rs.spec.ss_draws, rs.spec.ss_rounds).estimate;
}

}  // namespace

SummaryTable run_experiment(const ExperimentConfig& cfg) {
    SummaryTable table;
    table.master_seed = cfg.master_seed;
    table.hash = config_hash(cfg);

    bool battery_needs_pi = false;
    for (const auto& e : cfg.battery) battery_needs_pi |= e.name == "eig";

    for (std::size_t cell = 0; cell < cfg.targets.size(); ++cell) {
        const TargetSpec& spec = cfg.targets[cell];
        const std::uint64_t graph_seed = spec.target.rng_seed != 0
                                             ? spec.target.rng_seed
                                             : Rng::mix(Rng::mix(cfg.master_seed, cell), 0xBA5Eu);
        const DirectedGraph shared_graph = build_graph(spec, graph_seed);
        const double true_p = proportion_a(shared_graph);
        const double population_m = group_degree_ratios(shared_graph).attractivity;

        std::vector<ResolvedSpec> battery;
        for (const auto& e : cfg.battery) {
            ResolvedSpec rs;
            rs.spec = e;
            rs.m = e.m.value_or(population_m);
            rs.n = e.population_size.value_or(shared_graph.node_count());
            rs.needs_pi = e.name == "eig";
            battery.push_back(std::move(rs));
        }

        StationaryDistribution shared_pi;
        if (battery_needs_pi && !cfg.regenerate_graph_per_replication)
            shared_pi = stationary_distribution(shared_graph);

        const std::size_t reps = cfg.replications;
        const std::size_t n_est = battery.size();
        std::vector<double> estimates(reps * n_est, std::nan(""));

        parallel_for(reps, [&](std::size_t rep) {
            try {
                const DirectedGraph* graph = &shared_graph;
                DirectedGraph own_graph;
                StationaryDistribution own_pi;
                const StationaryDistribution* pi = &shared_pi;
                if (cfg.regenerate_graph_per_replication) {
                    own_graph = build_graph(spec, Rng::mix(Rng::mix(cfg.master_seed, cell),
                                                           0x6E000000ull + rep));
                    graph = &own_graph;
                    if (battery_needs_pi) {
                        own_pi = stationary_distribution(own_graph);
                        pi = &own_pi;
                    }
                }
                SamplerConfig sc = cfg.sampler;
                sc.rng_seed = Rng::mix(Rng::mix(cfg.master_seed, cell), rep + 1);
                const RdsSample sample = run_rds(*graph, sc);
                for (std::size_t e = 0; e < n_est; ++e) {
                    try {
                        estimates[rep * n_est + e] = evaluate(battery[e], sample, pi);
                    } catch (const std::exception&) {
                        // left as NaN; counted below
                    }
                }
            } catch (const std::exception&) {
                // whole replication failed; all estimators count a failure
            }
        });

        for (std::size_t e = 0; e < n_est; ++e) {
            double sum = 0, sum_sq_err = 0;
            std::uint32_t ok = 0, failures = 0;
            for (std::size_t rep = 0; rep < reps; ++rep) {
                const double v = estimates[rep * n_est + e];
                if (std::isnan(v)) {
                    ++failures;
                    continue;
                }
                ++ok;
                sum += v;
                sum_sq_err += (v - true_p) * (v - true_p);
            }
            SummaryRow row;
            row.target_id = spec.target.id;
            row.estimator = battery[e].spec.name;
            row.params = params_string(battery[e].spec, battery[e].m, battery[e].n);
            row.true_p = true_p;
            row.failures = failures;
            row.flagged = failures * 20 > reps;  // > 5%
            if (ok > 0) {
                const double mean = sum / ok;
                row.bias = mean - true_p;
                row.rmse = std::sqrt(sum_sq_err / ok);
                const double var = std::max(0.0, row.rmse * row.rmse - row.bias * row.bias);
                row.sd = std::sqrt(var);
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

namespace {

std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace

void emit_csv(const SummaryTable& table, std::ostream& out) {
    if (table.rows.empty()) throw std::invalid_argument("emit: empty summary table");
    out << "# config_hash=" << table.hash << '\n';
    out << "# master_seed=" << table.master_seed << '\n';
    out << "target_id,estimator,params,bias,sd,rmse,failures,true_p,flagged\n";
    for (const auto& r : table.rows) {
        out << r.target_id << ',' << r.estimator << ",\"" << r.params << "\"," << fmt6(r.bias) << ','
            << fmt6(r.sd) << ',' << fmt6(r.rmse) << ',' << r.failures << ',' << fmt6(r.true_p) << ','
            << (r.flagged ? 1 : 0) << '\n';
    }
}

void emit_json(const SummaryTable& table, std::ostream& out) {
    if (table.rows.empty()) throw std::invalid_argument("emit: empty summary table");
    json rows = json::array();
    for (const auto& r : table.rows) {
        rows.push_back({{"target_id", r.target_id},
                        {"estimator", r.estimator},
                        {"params", r.params},
                        {"bias", r.bias},
                        {"sd", r.sd},
                        {"rmse", r.rmse},
                        {"failures", r.failures},
                        {"true_p", r.true_p},
                        {"flagged", r.flagged}});
    }
    out << json{{"config_hash", table.hash}, {"master_seed", table.master_seed}, {"rows", rows}}.dump(2)
        << '\n';
}

SummaryTable read_summary_csv(std::istream& in) {
    SummaryTable table;
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (line.rfind("# config_hash=", 0) == 0) {
            table.hash = line.substr(14);
            continue;
        }
        if (line.rfind("# master_seed=", 0) == 0) {
            table.master_seed = std::stoull(line.substr(14));
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;  // column header
            continue;
        }
        std::vector<std::string> f;
        std::string field;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') {
                quoted = !quoted;
            } else if (c == ',' && !quoted) {
                f.push_back(field);
                field.clear();
            } else {
                field += c;
            }
        }
        f.push_back(field);
        if (f.size() != 9) throw std::runtime_error("summary csv: expected 9 fields, got line '" + line + "'");
        SummaryRow r;
        r.target_id = f[0];
        r.estimator = f[1];
        r.params = f[2];
        r.bias = std::stod(f[3]);
        r.sd = std::stod(f[4]);
        r.rmse = std::stod(f[5]);
        r.failures = static_cast<std::uint32_t>(std::stoul(f[6]));
        r.true_p = std::stod(f[7]);
        r.flagged = f[8] == "1";
        table.rows.push_back(std::move(r));
    }
    if (table.rows.empty()) throw std::runtime_error("summary csv: no rows");
    return table;
}

}  // namespace rdslab
