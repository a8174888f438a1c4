#include "rdslab/metrics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdslab {

double directedness(const DirectedGraph& g) {
    if (g.edge_count() == 0) throw std::invalid_argument("directedness: graph has no edges");
    std::size_t unreciprocated = 0;
    for (const auto& e : g.edges())
        if (!g.has_edge(e.to, e.from)) ++unreciprocated;
    return static_cast<double>(unreciprocated) / static_cast<double>(g.edge_count());
}

double indegree_assortativity(const DirectedGraph& g) {
    const std::size_t m = g.edge_count();
    if (m < 2) throw std::domain_error("indegree assortativity: need at least two edges");
    double sum_jk = 0, sum_half = 0, sum_half_sq = 0;
    for (const auto& e : g.edges()) {
        const double j = g.in_degree(e.from);
        const double k = g.in_degree(e.to);
        sum_jk += j * k;
        sum_half += 0.5 * (j + k);
        sum_half_sq += 0.5 * (j * j + k * k);
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    const double mu = sum_half * inv_m;
    const double denom = sum_half_sq * inv_m - mu * mu;
    if (denom <= 0) throw std::domain_error("indegree assortativity undefined: zero variance");
    return (sum_jk * inv_m - mu * mu) / denom;
}

double in_out_correlation(const DirectedGraph& g) {
    const std::uint32_t n = g.node_count();
    if (n < 2) throw std::domain_error("in/out correlation: need at least two nodes");
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        const double x = g.in_degree(v);
        const double y = g.out_degree(v);
        sx += x;
        sy += y;
        sxx += x * x;
        syy += y * y;
        sxy += x * y;
    }
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    if (vx <= 0 || vy <= 0) throw std::domain_error("in/out correlation undefined: zero variance");
    return (sxy - sx * sy / n) / std::sqrt(vx * vy);
}

RecruitmentMatrix true_recruitment_matrix(const DirectedGraph& g) {
    if (!g.has_traits()) throw std::invalid_argument("recruitment matrix: graph has no traits");
    double c[2][2] = {{0, 0}, {0, 0}};
    for (const auto& e : g.edges())
        c[static_cast<int>(g.trait(e.from))][static_cast<int>(g.trait(e.to))] += 1.0;
    const double from_a = c[0][0] + c[0][1];
    const double from_b = c[1][0] + c[1][1];
    if (from_a == 0) throw std::domain_error("recruitment matrix: group A has no outgoing edges");
    if (from_b == 0) throw std::domain_error("recruitment matrix: group B has no outgoing edges");
    return {c[0][0] / from_a, c[0][1] / from_a, c[1][0] / from_b, c[1][1] / from_b};
}

double proportion_a(const DirectedGraph& g) {
    if (!g.has_traits()) throw std::invalid_argument("proportion_a: graph has no traits");
    return static_cast<double>(g.count_trait(Trait::A)) / g.node_count();
}

double homophily(const DirectedGraph& g) {
    const double p_b = 1.0 - proportion_a(g);
    if (p_b == 0) throw std::domain_error("homophily undefined: group B is empty");
    const RecruitmentMatrix s = true_recruitment_matrix(g);
    return 1.0 - s.ab / p_b;
}

GroupDegreeRatios group_degree_ratios(const DirectedGraph& g) {
    if (!g.has_traits()) throw std::invalid_argument("degree ratios: graph has no traits");
    double in_sum[2] = {0, 0}, out_sum[2] = {0, 0};
    std::uint32_t count[2] = {0, 0};
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        const int t = static_cast<int>(g.trait(v));
        in_sum[t] += g.in_degree(v);
        out_sum[t] += g.out_degree(v);
        ++count[t];
    }
    if (count[0] == 0 || count[1] == 0) throw std::domain_error("degree ratios: a group is empty");
    if (in_sum[1] == 0 || out_sum[1] == 0)
        throw std::domain_error("degree ratios: group B mean degree is zero");
    const double m = (in_sum[0] / count[0]) / (in_sum[1] / count[1]);
    const double w = (out_sum[0] / count[0]) / (out_sum[1] / count[1]);
    return {m, w};
}

GraphMetrics compute_metrics(const DirectedGraph& g) {
    GraphMetrics m{};
    m.directedness = directedness(g);
    try {
        m.indegree_assortativity = indegree_assortativity(g);
    } catch (const std::domain_error&) {
        m.indegree_assortativity = std::numeric_limits<double>::quiet_NaN();
    }
    try {
        m.in_out_correlation = in_out_correlation(g);
    } catch (const std::domain_error&) {
        m.in_out_correlation = std::numeric_limits<double>::quiet_NaN();
    }
    m.homophily_a = homophily(g);
    const GroupDegreeRatios r = group_degree_ratios(g);
    m.attractivity = r.attractivity;
    m.activity = r.activity;
    m.proportion_a = proportion_a(g);
    return m;
}

}  // namespace rdslab
