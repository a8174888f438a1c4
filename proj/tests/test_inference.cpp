#include <cmath>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"
#include "rdslab/bootstrap.hpp"
#include "rdslab/netgen.hpp"
#include "rdslab/sensitivity.hpp"

using namespace rdslab;

namespace {

RdsSample chain_sample(std::uint32_t n_a, std::uint32_t n_b, std::uint64_t seed,
                       double stay_prob = 0.5) {
    // alternating-ish recruitment chain over a synthetic trait sequence so
    // the observed recruitment matrix is well defined
    Rng rng(seed);
    RdsSample s;
    Trait t = Trait::A;
    std::uint32_t used_a = 0, used_b = 0;
    for (std::uint32_t i = 0; i < n_a + n_b; ++i) {
        if (used_a == n_a) t = Trait::B;
        else if (used_b == n_b) t = Trait::A;
        (t == Trait::A ? used_a : used_b)++;
        const std::uint32_t degree = 2 + static_cast<std::uint32_t>(rng.below(6));
        s.records.push_back({i, i == 0 ? -1 : static_cast<std::int64_t>(i - 1), i, degree, degree, t});
        if (rng.next_double() > stay_prob) t = t == Trait::A ? Trait::B : Trait::A;
    }
    return s;
}

}  // namespace

TEST_CASE("bootstrap: intervals are order statistics of the replicate estimates") {
    const RdsSample s = chain_sample(60, 40, 1);
    BootstrapConfig cfg;
    cfg.replicates = 1000;
    cfg.levels = {0.90, 0.95};
    cfg.estimator = BootstrapConfig::Estimator::VhM;
    cfg.m = 1.1;
    cfg.rng_seed = 2;
    const BootstrapResult r = bootstrap_ci(s, cfg);

    REQUIRE(r.replicate_estimates.size() == 1000);
    CHECK(r.intervals[0].lower == r.replicate_estimates[50]);
    CHECK(r.intervals[0].upper == r.replicate_estimates[949]);
    CHECK(r.intervals[1].lower == r.replicate_estimates[25]);
    CHECK(r.intervals[1].upper == r.replicate_estimates[974]);

    // wider level contains the narrower one, and the median sits inside
    CHECK(r.intervals[1].lower <= r.intervals[0].lower);
    CHECK(r.intervals[1].upper >= r.intervals[0].upper);
    const double median = r.replicate_estimates[500];
    CHECK(r.intervals[0].lower <= median);
    CHECK(median <= r.intervals[0].upper);
}

TEST_CASE("bootstrap: symmetric sample gives an interval symmetric about one half") {
    // equal group sizes, all transitions balanced by construction
    RdsSample s;
    for (std::uint32_t i = 0; i < 200; ++i) {
        const Trait t = (i / 2) % 2 == 0 ? Trait::A : Trait::B;  // AABB AABB ...
        s.records.push_back({i, i == 0 ? -1 : static_cast<std::int64_t>(i - 1), i, 4, 4, t});
    }
    BootstrapConfig cfg;
    cfg.replicates = 2000;
    cfg.levels = {0.90};
    cfg.estimator = BootstrapConfig::Estimator::VhM;
    cfg.m = 1.0;
    cfg.rng_seed = 3;
    const BootstrapResult r = bootstrap_ci(s, cfg);
    CHECK(std::abs(r.intervals[0].lower + r.intervals[0].upper - 1.0) < 0.05);
}

TEST_CASE("bootstrap: replicate compositions follow the two-state chain of the observed matrix") {
    // strongly diagonal recruitment matrix: composition variance over
    // replicates must reflect the chain's autocorrelation, not iid draws
    const RdsSample s = chain_sample(150, 150, 4, /*stay_prob=*/0.8);
    const RecruitmentMatrix sm = sample_recruitment_matrix(s);
    REQUIRE(sm.aa > 0.7);  // sanity: the synthetic chain is homophilous

    BootstrapConfig cfg;
    cfg.replicates = 3000;
    cfg.levels = {0.90};
    cfg.estimator = BootstrapConfig::Estimator::VhM;
    cfg.m = 1.0;  // replicate estimate == replicate composition
    cfg.rng_seed = 5;
    const BootstrapResult r = bootstrap_ci(s, cfg);

    double mean = 0;
    for (double e : r.replicate_estimates) mean += e;
    mean /= r.replicate_estimates.size();
    double var = 0;
    for (double e : r.replicate_estimates) var += (e - mean) * (e - mean);
    var /= r.replicate_estimates.size();

    const double q = sm.ba / (sm.ab + sm.ba);  // chain's stationary share of A
    const double rho = 1.0 - sm.ab - sm.ba;    // lag-1 autocorrelation
    const double n = static_cast<double>(s.size());
    const double theory = q * (1 - q) / n * (1 + rho) / (1 - rho);
    CHECK(std::abs(mean - q) < 3 * std::sqrt(theory));
    CHECK(var / theory > 0.6);
    CHECK(var / theory < 1.6);
}

TEST_CASE("bootstrap: degenerate recruitment matrix is rejected") {
    RdsSample s;  // a single A recruiting only As: row B undefined
    for (std::uint32_t i = 0; i < 10; ++i)
        s.records.push_back({i, i == 0 ? -1 : static_cast<std::int64_t>(i - 1), i, 3, 3, Trait::A});
    BootstrapConfig cfg;
    CHECK_THROWS_AS(bootstrap_ci(s, cfg), std::domain_error);
}

TEST_CASE("coverage study: certain-coverage configuration counts every replication") {
    GenTarget t;
    t.family = NetFamily::Net2;
    t.node_count = 600;
    t.mean_degree = 10;
    t.directedness_target = 0.3;
    t.attractivity_target = 1.0;
    t.proportion_a = 0.5;
    t.rng_seed = 6;
    const DirectedGraph g = generate(t);

    SamplerConfig sc{5, 3, 150, false, 7};
    BootstrapConfig bc;
    bc.replicates = 200;
    bc.levels = {0.999};  // effectively the full replicate range
    bc.estimator = BootstrapConfig::Estimator::VhM;
    bc.m = group_degree_ratios(g).attractivity;
    bc.rng_seed = 8;

    const CoverageResult r = coverage_study(g, sc, bc, 20, proportion_a(g));
    CHECK(r.failed_replications == 0);
    CHECK(r.coverage[0] == doctest::Approx(1.0).epsilon(0.11));
}

TEST_CASE("sensitivity sweep") {
    const RdsSample s = chain_sample(130, 70, 9);

    SUBCASE("endpoints equal direct evaluations exactly") {
        const SensitivityCurve c = sensitivity_sweep(s, 0.5, 1.5, 11);
        REQUIRE(c.points.size() == 11);
        CHECK(c.points.front().estimate == vh_m(s, 0.5).estimate);
        CHECK(c.points.back().estimate == vh_m(s, 1.5).estimate);
        CHECK(c.points.front().m == 0.5);
        CHECK(c.points.back().m == 1.5);
    }
    SUBCASE("estimates strictly decrease along the grid") {
        const SensitivityCurve c = sensitivity_sweep(s, 0.5, 2.0, 16);
        for (std::size_t i = 1; i < c.points.size(); ++i)
            CHECK(c.points[i].estimate < c.points[i - 1].estimate);
    }
    SUBCASE("analytic derivative matches central finite differences") {
        const SensitivityCurve c = sensitivity_sweep(s, 0.5, 2.0, 16);
        const double h = 1e-6;
        for (const auto& p : c.points) {
            const double fd = (vh_m(s, p.m + h).estimate - vh_m(s, p.m - h).estimate) / (2 * h);
            CHECK(std::abs(p.derivative - fd) / std::abs(fd) < 1e-6);
        }
    }
    SUBCASE("vh_m at the sample activity ratio reproduces vh_out") {
        const SensitivityCurve c = sensitivity_sweep(s, 0.5, 1.5, 3);
        CHECK(vh_m(s, c.activity_ratio).estimate == doctest::Approx(vh_out(s).estimate).epsilon(1e-12));
        CHECK(c.derivative_at_activity == doctest::Approx(vh_m_derivative(s, c.activity_ratio)));
    }
    SUBCASE("bootstrap intervals attach per grid point") {
        BootstrapConfig bc;
        bc.replicates = 300;
        bc.levels = {0.90};
        bc.rng_seed = 10;
        const SensitivityCurve c = sensitivity_sweep(s, 0.8, 1.2, 5, bc);
        for (const auto& p : c.points) {
            CHECK(p.has_ci);
            CHECK(p.lower <= p.estimate);
            CHECK(p.estimate <= p.upper);
        }
    }
    SUBCASE("csv emission has the pinned column layout") {
        const SensitivityCurve c = sensitivity_sweep(s, 0.5, 1.5, 3);
        std::ostringstream out;
        write_sweep_csv(c, out);
        std::istringstream lines(out.str());
        std::string header;
        std::getline(lines, header);
        CHECK(header == "m,estimate,lo,hi,derivative");
        std::string row;
        std::getline(lines, row);
        CHECK(row.find(",,") != std::string::npos);  // empty lo/hi without bootstrap
    }
    SUBCASE("invalid grids are rejected") {
        CHECK_THROWS_AS(sensitivity_sweep(s, 1.5, 0.5, 5), std::invalid_argument);
        CHECK_THROWS_AS(sensitivity_sweep(s, 0.5, 1.5, 1), std::invalid_argument);
    }
}

TEST_CASE("bootstrap: an absorbing recruitment matrix fails loudly") {
    // group A only ever recruits A, so most replicate chains carry no B at
    // all and the degenerate-replicate budget (1%) is blown
    RdsSample s;
    s.records.push_back({0, -1, 0, 3, 3, Trait::A});
    s.records.push_back({1, 0, 1, 3, 3, Trait::A});
    s.records.push_back({2, -1, 0, 3, 3, Trait::B});
    s.records.push_back({3, 2, 1, 3, 3, Trait::A});
    s.records.push_back({4, 2, 1, 3, 3, Trait::B});
    BootstrapConfig cfg;
    cfg.replicates = 400;
    cfg.estimator = BootstrapConfig::Estimator::VhM;
    cfg.m = 1.0;
    cfg.rng_seed = 77;
    CHECK_THROWS_WITH_AS(bootstrap_ci(s, cfg), doctest::Contains("1%"), std::runtime_error);
}
