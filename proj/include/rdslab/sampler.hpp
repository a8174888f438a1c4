#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "rdslab/graph.hpp"
#include "rdslab/metrics.hpp"

namespace rdslab {

struct SamplerConfig {
    std::uint32_t seed_count = 10;
    std::uint32_t coupons_per_respondent = 3;
    std::uint32_t target_sample_size = 500;
    bool with_replacement = false;
    std::uint64_t rng_seed = 1;
};

struct RdsRecord {
    std::uint32_t respondent;
    std::int64_t recruiter;  // node id, or -1 for a seed
    std::uint32_t wave;      // 0 for seeds
    std::uint32_t out_degree;
    std::uint32_t in_degree;  // 0 when the sample carries no indegrees
    Trait trait;
};

// Ordered recruitment records; the input of every estimator. Without
// replacement all respondents are distinct; with replacement repeat visits
// are separate records (estimators treat records as the multiset of draws).
struct RdsSample {
    std::vector<RdsRecord> records;
    SamplerConfig config{};
    bool has_in_degrees = true;

    std::size_t size() const { return records.size(); }
    std::uint32_t count(Trait t) const {
        std::uint32_t c = 0;
        for (const auto& r : records)
            if (r.trait == t) ++c;
        return c;
    }
};

/// Simulates coupon-limited RDS on g: uniformly chosen seeds, breadth-first
/// coupon processing, recruits drawn uniformly among eligible out-neighbors
/// (all out-neighbors with replacement, unsampled ones without). A coupon
/// whose recruiter has no eligible neighbor is forfeited; when every chain
/// dies before target_sample_size, a fresh seed is injected among unsampled
/// nodes. Deterministic given cfg.rng_seed.
RdsSample run_rds(const DirectedGraph& g, const SamplerConfig& cfg);

/// Observed recruitment matrix over non-seed records. Throws when a group
/// made no recruitments (that row would be undefined and the SH-family
/// estimators are inapplicable).
RecruitmentMatrix sample_recruitment_matrix(const RdsSample& s);

struct GroupDegreeSummary {
    std::uint32_t n_a = 0, n_b = 0;
    double harmonic_out_a = 0, harmonic_out_b = 0;
    double harmonic_in_a = 0, harmonic_in_b = 0;  // NaN when indegrees absent
    double mean_out_a = 0, mean_out_b = 0;
    double mean_in_a = 0, mean_in_b = 0;
};

/// Group counts plus harmonic and arithmetic mean degrees per group.
/// Harmonic mean of group X = n_X / sum of reciprocal degrees.
GroupDegreeSummary sample_group_counts_and_degrees(const RdsSample& s);

/// CSV schema shared with real-study ingestion:
/// respondent,recruiter,wave,out_degree,in_degree,trait with recruiter -1
/// marking seeds. The in_degree column is dropped when the sample has none.
void write_sample_csv(const RdsSample& s, std::ostream& out);

/// Parses and validates the schema above; the in_degree column may be
/// absent (real studies), in which case indegree-based estimators will
/// refuse the sample. Checks recruiter linkage (each non-seed recruiter
/// appears earlier with the previous wave) and positive degrees.
RdsSample ingest_sample(std::istream& in);

}  // namespace rdslab
