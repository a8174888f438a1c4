#include "rdslab/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "helpers.hpp"

using namespace rdslab;

namespace {

// Literal transcription of the assortativity formula, kept independent of
// the library implementation.
double assortativity_oracle(const DirectedGraph& g) {
    const double e = static_cast<double>(g.edge_count());
    double sum_jk = 0, sum_half = 0, sum_sq = 0;
    for (const auto& edge : g.edges()) {
        const double j = g.in_degree(edge.from);
        const double k = g.in_degree(edge.to);
        sum_jk += j * k;
        sum_half += (j + k) / 2.0;
        sum_sq += (j * j + k * k) / 2.0;
    }
    const double mean = sum_half / e;
    return (sum_jk / e - mean * mean) / (sum_sq / e - mean * mean);
}

}  // namespace

TEST_CASE("metrics: directedness") {
    // fully reciprocal 4-cycle
    const auto cycle4 = test::make_graph(
        4, {{0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 3}, {3, 2}, {3, 0}, {0, 3}});
    CHECK(directedness(cycle4) == 0.0);

    const auto cycle3 = test::make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
    CHECK(directedness(cycle3) == 1.0);

    CHECK_THROWS_AS(directedness(DirectedGraph(3)), std::invalid_argument);
}

TEST_CASE("metrics: directedness of the reciprocated closure is zero") {
    const DirectedGraph g = test::random_graph(30, 120, 11);
    CHECK(directedness(test::closure(g)) == 0.0);
}

TEST_CASE("metrics: indegree assortativity") {
    SUBCASE("zero variance is an explicit error, not 0") {
        const auto cycle3 = test::make_graph(3, {{0, 1}, {1, 2}, {2, 0}});  // all indegrees 1
        CHECK_THROWS_AS(indegree_assortativity(cycle3), std::domain_error);
    }
    SUBCASE("matches the direct formula on a random graph") {
        const DirectedGraph g = test::random_graph(20, 70, 5);
        CHECK(indegree_assortativity(g) == doctest::Approx(assortativity_oracle(g)).epsilon(1e-12));
    }
    SUBCASE("large uncorrelated random digraph stays in the reference range") {
        // sparse random digraphs carry a small negative offset of order 1/mean-degree
        const DirectedGraph g = test::random_graph(10000, 100000, 17, /*allow_reciprocal=*/false);
        const double gamma = indegree_assortativity(g);
        CHECK(gamma > -0.09);
        CHECK(gamma < 0.01);
    }
}

TEST_CASE("metrics: in/out degree correlation") {
    SUBCASE("mirrored degrees give exactly 1") {
        const DirectedGraph g = test::closure(test::random_graph(50, 120, 23));
        CHECK(in_out_correlation(g) == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("uncorrelated pure-directed graph sits near zero") {
        const DirectedGraph g = test::random_graph(4000, 20000, 29, /*allow_reciprocal=*/false);
        CHECK(std::abs(in_out_correlation(g)) < 0.05);
    }
    SUBCASE("zero variance is an error") {
        const auto cycle3 = test::make_graph(3, {{0, 1}, {1, 2}, {2, 0}});
        CHECK_THROWS_AS(in_out_correlation(cycle3), std::domain_error);
    }
}

TEST_CASE("metrics: recruitment matrix is row-stochastic and matches random mixing") {
    DirectedGraph g = test::random_graph(3000, 24000, 31);
    test::random_traits(g, 0.6, 41);
    const RecruitmentMatrix s = true_recruitment_matrix(g);
    CHECK(s.aa + s.ab == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.ba + s.bb == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.aa == doctest::Approx(proportion_a(g)).epsilon(0.05));

    SUBCASE("group with no outgoing edges is an error") {
        auto star = test::make_graph(3, {{0, 1}, {0, 2}, {1, 0}}, "AAB");  // B never originates
        CHECK_THROWS_AS(true_recruitment_matrix(star), std::domain_error);
    }
}

TEST_CASE("metrics: degree-sum balance identity holds on any traited graph") {
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        DirectedGraph g = test::random_graph(200, 1500, seed);
        test::random_traits(g, 0.35, seed + 100);
        const RecruitmentMatrix s = true_recruitment_matrix(g);

        double in_sum[2] = {0, 0}, out_sum[2] = {0, 0};
        double count[2] = {0, 0};
        for (std::uint32_t v = 0; v < g.node_count(); ++v) {
            const int t = static_cast<int>(g.trait(v));
            in_sum[t] += g.in_degree(v);
            out_sum[t] += g.out_degree(v);
            count[t] += 1;
        }
        const double lhs1 = out_sum[0] * s.aa + out_sum[1] * s.ba;  // N_X out-mean = out_sum
        const double lhs2 = out_sum[0] * s.ab + out_sum[1] * s.bb;
        CHECK(std::abs(lhs1 - in_sum[0]) / in_sum[0] < 1e-9);
        CHECK(std::abs(lhs2 - in_sum[1]) / in_sum[1] < 1e-9);
    }
}

TEST_CASE("metrics: homophily") {
    SUBCASE("random mixing gives homophily near zero") {
        DirectedGraph g = test::random_graph(4000, 30000, 51);
        test::random_traits(g, 0.5, 61);
        CHECK(std::abs(homophily(g)) < 0.02);
    }
    SUBCASE("two cliques joined by one reciprocal tie are near-perfectly homophilous") {
        DirectedGraph g(10);
        for (std::uint32_t i = 0; i < 5; ++i)
            for (std::uint32_t j = 0; j < 5; ++j)
                if (i != j) {
                    g.add_edge(i, j);
                    g.add_edge(i + 5, j + 5);
                }
        g.add_edge(0, 5);
        g.add_edge(5, 0);
        g.assign_traits({Trait::A, Trait::A, Trait::A, Trait::A, Trait::A, Trait::B, Trait::B,
                         Trait::B, Trait::B, Trait::B});
        CHECK(homophily(g) > 0.85);
        CHECK(true_recruitment_matrix(g).ab < 0.05);
    }
    SUBCASE("identity S_AA = h + (1-h) p_A") {
        DirectedGraph g = test::random_graph(300, 2500, 71);
        test::random_traits(g, 0.42, 81);
        const double h = homophily(g);
        const double p_a = proportion_a(g);
        const RecruitmentMatrix s = true_recruitment_matrix(g);
        CHECK(s.aa == doctest::Approx(h + (1 - h) * p_a).epsilon(1e-12));
    }
}

TEST_CASE("metrics: group degree ratios") {
    SUBCASE("identical degrees give (1, 1)") {
        const auto ring = test::make_graph(4, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, "AABB");
        const auto r = group_degree_ratios(ring);
        CHECK(r.attractivity == 1.0);
        CHECK(r.activity == 1.0);
    }
    SUBCASE("fully reciprocal graph has m* == w* exactly") {
        DirectedGraph g = test::closure(test::random_graph(60, 200, 91));
        test::random_traits(g, 0.3, 101);
        const auto r = group_degree_ratios(g);
        CHECK(r.attractivity == r.activity);
    }
}

TEST_CASE("metrics: deterministic recomputation") {
    DirectedGraph g = test::random_graph(500, 4000, 111);
    test::random_traits(g, 0.55, 121);
    const GraphMetrics a = compute_metrics(g);
    const GraphMetrics b = compute_metrics(g);
    CHECK(a.directedness == b.directedness);
    CHECK(a.indegree_assortativity == b.indegree_assortativity);
    CHECK(a.in_out_correlation == b.in_out_correlation);
    CHECK(a.homophily_a == b.homophily_a);
    CHECK(a.attractivity == b.attractivity);
    CHECK(a.activity == b.activity);
    CHECK(a.proportion_a == b.proportion_a);
}
