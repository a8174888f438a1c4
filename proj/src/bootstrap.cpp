#include "rdslab/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rdslab/parallel.hpp"
#include "rdslab/rng.hpp"

namespace rdslab {

namespace {

std::pair<std::size_t, std::size_t> percentile_ranks(double level, std::size_t count) {
    const double alpha = (1.0 - level) / 2.0;
    auto lo = static_cast<std::size_t>(std::floor(alpha * static_cast<double>(count)));
    auto hi = static_cast<std::size_t>(std::ceil((1.0 - alpha) * static_cast<double>(count)));
    if (hi > 0) --hi;
    lo = std::min(lo, count - 1);
    hi = std::min(hi, count - 1);
    return {lo, hi};
}

}  // namespace

BootstrapResult bootstrap_ci(const RdsSample& s, const BootstrapConfig& cfg) {
    if (cfg.replicates < 2) throw std::invalid_argument("bootstrap: need at least 2 replicates");
    for (double level : cfg.levels)
        if (level <= 0 || level >= 1) throw std::invalid_argument("bootstrap: levels must lie in (0, 1)");
    const std::size_t n = s.size();
    if (n == 0) throw std::invalid_argument("bootstrap: empty sample");

    const RecruitmentMatrix sm = sample_recruitment_matrix(s);  // throws when a row is undefined
    const bool use_vh_out = cfg.estimator == BootstrapConfig::Estimator::VhOut;

    BootstrapResult result;
    result.point_estimate = use_vh_out ? vh_out(s).estimate : vh_m(s, cfg.m).estimate;

    // members grouped by trait; vh_out only needs their inverse outdegrees
    std::vector<double> inv_out[2];
    std::vector<std::uint8_t> traits;
    traits.reserve(n);
    for (const auto& r : s.records) {
        if (r.out_degree == 0) throw std::domain_error("bootstrap: zero out-degree record");
        inv_out[static_cast<int>(r.trait)].push_back(1.0 / r.out_degree);
        traits.push_back(static_cast<std::uint8_t>(r.trait));
    }
    if (inv_out[0].empty() || inv_out[1].empty())
        throw std::domain_error("bootstrap: a trait group is empty");

    std::vector<double> estimates;
    estimates.reserve(cfg.replicates);
    for (std::uint32_t b = 0; b < cfg.replicates; ++b) {
        Rng rng(Rng::mix(cfg.rng_seed, b));
        // chain start: the trait of a uniformly chosen original respondent
        int state = traits[rng.index(n)];
        double num = 0, den = 0;
        std::uint32_t count_a = 0;
        auto absorb = [&](int trait_state) {
            if (use_vh_out) {
                const auto& pool = inv_out[trait_state];
                const double w = pool[rng.index(pool.size())];
                den += w;
                if (trait_state == 0) num += w;
            } else if (trait_state == 0) {
                ++count_a;
            }
        };
        absorb(state);
        for (std::size_t step = 1; step < n; ++step) {
            const double stay_row_a = state == 0 ? sm.aa : sm.ba;
            state = rng.next_double() < stay_row_a ? 0 : 1;
            absorb(state);
        }
        if (use_vh_out) {
            estimates.push_back(num / den);
        } else {
            const std::uint32_t count_b = static_cast<std::uint32_t>(n) - count_a;
            if (count_b == 0) {  // degenerate replicate; skipped and counted
                ++result.skipped_replicates;
                continue;
            }
            const double r = static_cast<double>(count_a) / count_b;
            estimates.push_back(r / (r + cfg.m));
        }
    }
    if (result.skipped_replicates * 100 > cfg.replicates)
        throw std::runtime_error("bootstrap: more than 1% of replicates were degenerate");

    std::sort(estimates.begin(), estimates.end());
    for (double level : cfg.levels) {
        const auto [lo, hi] = percentile_ranks(level, estimates.size());
        result.intervals.push_back({level, estimates[lo], estimates[hi]});
    }
    result.replicate_estimates = std::move(estimates);
    return result;
}

CoverageResult coverage_study(const DirectedGraph& g, const SamplerConfig& sampler_cfg,
                              const BootstrapConfig& bootstrap_cfg, std::uint32_t outer_reps,
                              double true_p) {
    if (outer_reps == 0) throw std::invalid_argument("coverage study: need at least one replication");
    const std::size_t n_levels = bootstrap_cfg.levels.size();
    std::vector<std::uint8_t> covered(static_cast<std::size_t>(outer_reps) * n_levels, 0);
    std::vector<std::uint8_t> failed(outer_reps, 0);

    parallel_for(outer_reps, [&](std::size_t rep) {
        try {
            SamplerConfig sc = sampler_cfg;
            sc.rng_seed = Rng::mix(sampler_cfg.rng_seed, rep);
            const RdsSample sample = run_rds(g, sc);
            BootstrapConfig bc = bootstrap_cfg;
            bc.rng_seed = Rng::mix(bootstrap_cfg.rng_seed, rep);
            const BootstrapResult r = bootstrap_ci(sample, bc);
            for (std::size_t l = 0; l < n_levels; ++l) {
                const auto& ci = r.intervals[l];
                covered[rep * n_levels + l] = ci.lower <= true_p && true_p <= ci.upper;
            }
        } catch (const std::exception&) {
            failed[rep] = 1;
        }
    });

    CoverageResult out;
    out.levels = bootstrap_cfg.levels;
    out.coverage.assign(n_levels, 0.0);
    std::uint32_t ok = 0;
    for (std::uint32_t rep = 0; rep < outer_reps; ++rep) {
        if (failed[rep]) {
            ++out.failed_replications;
            continue;
        }
        ++ok;
        for (std::size_t l = 0; l < n_levels; ++l) out.coverage[l] += covered[rep * n_levels + l];
    }
    if (ok == 0) throw std::runtime_error("coverage study: every replication failed");
    for (double& c : out.coverage) c /= ok;
    return out;
}

}  // namespace rdslab
