#include "rdslab/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "rdslab/rng.hpp"

namespace rdslab {

namespace {

void require_nonempty(const RdsSample& s) {
    if (s.records.empty()) throw std::invalid_argument("estimator: empty sample");
}

void require_in_degrees(const RdsSample& s) {
    if (!s.has_in_degrees)
        throw std::invalid_argument("estimator: indegree unavailable in this sample");
}

EstimatorResult inverse_weighted(const RdsSample& s, DegreeSource source, const char* name) {
    require_nonempty(s);
    double num = 0, den = 0;
    for (const auto& r : s.records) {
        const std::uint32_t d = source == DegreeSource::Out ? r.out_degree : r.in_degree;
        if (d == 0) throw std::domain_error(std::string(name) + ": zero degree encountered");
        const double w = 1.0 / d;
        den += w;
        if (r.trait == Trait::A) num += w;
    }
    return {name, num / den, {}};
}

}  // namespace

EstimatorResult naive_estimate(const RdsSample& s) {
    require_nonempty(s);
    return {"naive", static_cast<double>(s.count(Trait::A)) / static_cast<double>(s.size()), {}};
}

EstimatorResult vh_out(const RdsSample& s) { return inverse_weighted(s, DegreeSource::Out, "vh_out"); }

EstimatorResult vh_in(const RdsSample& s) {
    require_in_degrees(s);
    return inverse_weighted(s, DegreeSource::In, "vh_in");
}

EstimatorResult vh_m(const RdsSample& s, double m) {
    require_nonempty(s);
    if (m <= 0) throw std::invalid_argument("vh_m: m must be positive");
    const auto n_a = s.count(Trait::A);
    const auto n_b = static_cast<std::uint32_t>(s.size()) - n_a;
    if (n_b == 0) throw std::domain_error("vh_m: degenerate sample, group B is empty");
    const double r = static_cast<double>(n_a) / n_b;
    return {"vh_m", r / (r + m), {{"m", m}}};
}

EstimatorResult sh_out(const RdsSample& s) {
    const RecruitmentMatrix sm = sample_recruitment_matrix(s);
    if (sm.ab == 0 && sm.ba == 0)
        throw std::domain_error("sh_out: no cross-group recruitment observed");
    const GroupDegreeSummary d = sample_group_counts_and_degrees(s);
    const double num = sm.ba * d.harmonic_out_b;
    return {"sh_out", num / (sm.ab * d.harmonic_out_a + num), {}};
}

double solve_phi(const RecruitmentMatrix& s, double m, double w) {
    if (m <= 0 || w <= 0) throw std::invalid_argument("solve_phi: degree ratios must be positive");
    if (s.ab <= 0) throw std::domain_error("solve_phi: S_AB is zero");
    const double q = (m * s.bb - w * s.aa) / (2.0 * m * w * s.ab);
    return -q + std::sqrt(s.ba / (m * w * s.ab) + q * q);
}

namespace {

EstimatorResult sh_family(const RdsSample& s, double m, MeanKind w_kind, const char* name) {
    const RecruitmentMatrix sm = sample_recruitment_matrix(s);
    const GroupDegreeSummary d = sample_group_counts_and_degrees(s);
    const double w = w_kind == MeanKind::Harmonic ? d.harmonic_out_a / d.harmonic_out_b
                                                  : d.mean_out_a / d.mean_out_b;
    const double phi = solve_phi(sm, m, w);
    EstimatorResult out{name, phi / (1.0 + phi), {{"m", m}, {"w", w}}};
    return out;
}

}  // namespace

EstimatorResult sh_in(const RdsSample& s, MeanKind w_kind) {
    require_in_degrees(s);
    const GroupDegreeSummary d = sample_group_counts_and_degrees(s);
    return sh_family(s, d.harmonic_in_a / d.harmonic_in_b, w_kind, "sh_in");
}

EstimatorResult sh_m(const RdsSample& s, double m, MeanKind w_kind) {
    if (m <= 0) throw std::invalid_argument("sh_m: m must be positive");
    return sh_family(s, m, w_kind, "sh_m");
}

namespace {

// One sweep of pi' = R^T pi blended with the lazy-walk damping; theta = 1 is
// the plain power iteration step.
void walk_step(const DirectedGraph& g, const std::vector<double>& pi, std::vector<double>& next,
               double theta) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        const double share = theta * pi[v] / g.out_degree(v);
        for (std::uint32_t w : g.out_neighbors(v)) next[w] += share;
    }
    if (theta != 1.0) {
        for (std::uint32_t v = 0; v < g.node_count(); ++v) next[v] += (1.0 - theta) * pi[v];
    }
}

bool power_iterate(const DirectedGraph& g, std::vector<double>& pi, double tol, int max_iterations,
                   double theta) {
    const std::uint32_t n = g.node_count();
    std::vector<double> next(n);
    for (int it = 0; it < max_iterations; ++it) {
        walk_step(g, pi, next, theta);
        double diff = 0, sum = 0;
        for (std::uint32_t v = 0; v < n; ++v) {
            diff += std::abs(next[v] - pi[v]);
            sum += next[v];
        }
        for (std::uint32_t v = 0; v < n; ++v) next[v] /= sum;
        pi.swap(next);
        if (diff < tol) return true;
    }
    return false;
}

}  // namespace

StationaryDistribution stationary_distribution(const DirectedGraph& g, double tol, int max_iterations) {
    const std::uint32_t n = g.node_count();
    if (!is_strongly_connected(g))
        throw std::invalid_argument("stationary distribution: graph is not strongly connected");
    std::vector<double> pi(n, 1.0 / n);
    if (!power_iterate(g, pi, tol, max_iterations, 1.0)) {
        std::fill(pi.begin(), pi.end(), 1.0 / n);
        if (!power_iterate(g, pi, tol, max_iterations, 0.999))
            throw std::runtime_error("stationary distribution: power iteration did not converge");
    }
    for (double p : pi)
        if (!(p > 0)) throw std::runtime_error("stationary distribution: nonpositive entry");
    return {std::move(pi)};
}

EstimatorResult eig_estimator(const RdsSample& s, const StationaryDistribution& pi) {
    require_nonempty(s);
    double num = 0, den = 0;
    for (const auto& r : s.records) {
        const double w = 1.0 / pi.probabilities.at(r.respondent);
        den += w;
        if (r.trait == Trait::A) num += w;
    }
    return {"eig", num / den, {}};
}

DegreeClassTable mean_field_pi(const DirectedGraph& g, double tol, int max_iterations) {
    if (!is_strongly_connected(g))
        throw std::invalid_argument("mean-field pi: graph is not strongly connected");
    const std::uint32_t n = g.node_count();

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> class_of;
    std::vector<std::uint32_t> node_class(n);
    DegreeClassTable table;
    for (std::uint32_t v = 0; v < n; ++v) {
        const auto key = std::make_pair(g.in_degree(v), g.out_degree(v));
        auto [it, inserted] = class_of.try_emplace(key, static_cast<std::uint32_t>(table.classes.size()));
        if (inserted) table.classes.push_back({key.first, key.second, 0, 0.0, 0.0});
        node_class[v] = it->second;
        ++table.classes[it->second].members;
    }
    const std::size_t k = table.classes.size();
    for (auto& c : table.classes) c.fraction = static_cast<double>(c.members) / n;
    table.mean_indegree = static_cast<double>(g.edge_count()) / n;

    // flow[to][from]: edges from class "from" to class "to"
    std::vector<std::vector<double>> flow(k, std::vector<double>(k, 0.0));
    for (const auto& e : g.edges()) flow[node_class[e.to]][node_class[e.from]] += 1.0;

    // Fixed point in class-mass space v(K) = N f_K pi_bar(K); the transition
    // matrix v'(K) = sum_K' flow[K][K'] / (k'_out * members_K') v(K') is
    // column-stochastic, so this is a Markov-chain power iteration.
    std::vector<std::vector<double>> t(k, std::vector<double>(k));
    for (std::size_t to = 0; to < k; ++to)
        for (std::size_t from = 0; from < k; ++from)
            t[to][from] = flow[to][from] /
                          (static_cast<double>(table.classes[from].k_out) * table.classes[from].members);

    std::vector<double> mass(k), next(k);
    for (std::size_t c = 0; c < k; ++c) mass[c] = table.classes[c].fraction;

    auto iterate = [&](double theta) {
        for (int it = 0; it < max_iterations; ++it) {
            double sum = 0;
            for (std::size_t to = 0; to < k; ++to) {
                double acc = 0;
                for (std::size_t from = 0; from < k; ++from) acc += t[to][from] * mass[from];
                next[to] = theta * acc + (1.0 - theta) * mass[to];
                sum += next[to];
            }
            double max_rel = 0;
            for (std::size_t c = 0; c < k; ++c) {
                next[c] /= sum;
                if (mass[c] > 0) max_rel = std::max(max_rel, std::abs(next[c] - mass[c]) / mass[c]);
            }
            mass.swap(next);
            if (max_rel < tol) return true;
        }
        return false;
    };
    if (!iterate(1.0)) {
        for (std::size_t c = 0; c < k; ++c) mass[c] = table.classes[c].fraction;
        if (!iterate(0.999))
            throw std::runtime_error("mean-field pi: fixed-point iteration did not converge");
    }

    for (std::size_t c = 0; c < k; ++c) table.classes[c].pi_bar = mass[c] / table.classes[c].members;
    return table;
}

EstimatorResult ss_estimator(const RdsSample& s, std::uint64_t population_size, DegreeSource source,
                             std::uint32_t m_draws, std::uint32_t rounds, std::uint64_t rng_seed) {
    require_nonempty(s);
    if (source == DegreeSource::In) require_in_degrees(s);
    const std::size_t n = s.size();
    if (population_size < n)
        throw std::invalid_argument("ss estimator: population size below sample size");
    if (m_draws == 0 || rounds == 0)
        throw std::invalid_argument("ss estimator: draw and round counts must be positive");

    // degree classes observed in the sample
    std::map<std::uint32_t, std::uint32_t> sample_count;
    for (const auto& r : s.records) {
        const std::uint32_t d = source == DegreeSource::Out ? r.out_degree : r.in_degree;
        if (d == 0) throw std::domain_error("ss estimator: zero degree encountered");
        ++sample_count[d];
    }
    const std::size_t k = sample_count.size();
    std::vector<double> degree(k), observed(k), incl(k);
    {
        std::size_t c = 0;
        for (const auto& [d, cnt] : sample_count) {
            degree[c] = d;
            observed[c] = cnt;
            incl[c] = d;  // initial guess: inclusion proportional to degree
            ++c;
        }
    }

    Rng rng(rng_seed);
    std::vector<double> pop(k), remaining(k), weight(k), selected(k);
    for (std::uint32_t round = 0; round < rounds; ++round) {
        // pseudo-population: scale observed counts by reciprocal inclusion
        // probabilities, floor at the observed counts
        double total = 0;
        for (std::size_t c = 0; c < k; ++c) {
            pop[c] = observed[c] / incl[c];
            total += pop[c];
        }
        const double scale = static_cast<double>(population_size) / total;
        for (std::size_t c = 0; c < k; ++c) pop[c] = std::max(observed[c], std::round(pop[c] * scale));

        std::fill(selected.begin(), selected.end(), 0.0);
        for (std::uint32_t sim = 0; sim < m_draws; ++sim) {
            double total_weight = 0;
            for (std::size_t c = 0; c < k; ++c) {
                remaining[c] = pop[c];
                weight[c] = pop[c] * degree[c];
                total_weight += weight[c];
            }
            for (std::size_t pick = 0; pick < n; ++pick) {
                double u = rng.next_double() * total_weight;
                std::size_t c = 0;
                for (; c + 1 < k; ++c) {
                    if (u < weight[c]) break;
                    u -= weight[c];
                }
                while (remaining[c] <= 0) c = (c + 1) % k;  // numeric edge: skip exhausted class
                remaining[c] -= 1.0;
                weight[c] -= degree[c];
                total_weight -= degree[c];
                selected[c] += 1.0;
            }
        }
        for (std::size_t c = 0; c < k; ++c)
            incl[c] = std::max(selected[c], 0.5) / (static_cast<double>(m_draws) * pop[c]);
    }

    std::map<std::uint32_t, double> weight_of;
    {
        std::size_t c = 0;
        for (const auto& [d, cnt] : sample_count) {
            weight_of[d] = 1.0 / incl[c];
            ++c;
        }
    }
    double num = 0, den = 0;
    for (const auto& r : s.records) {
        const std::uint32_t d = source == DegreeSource::Out ? r.out_degree : r.in_degree;
        const double w = weight_of[d];
        den += w;
        if (r.trait == Trait::A) num += w;
    }
    const char* name = source == DegreeSource::Out ? "ss_out" : "ss_in";
    return {name,
            num / den,
            {{"N", static_cast<double>(population_size)},
             {"M", static_cast<double>(m_draws)},
             {"r", static_cast<double>(rounds)}}};
}

RecruitmentMatrix adjusted_recruitment_matrix(const RdsSample& s) {
    std::unordered_map<std::int64_t, Trait> trait_of;
    double c[2][2] = {{0, 0}, {0, 0}};
    for (const auto& r : s.records) {
        if (r.recruiter >= 0) {
            auto it = trait_of.find(r.recruiter);
            if (it == trait_of.end())
                throw std::invalid_argument("sample: recruiter " + std::to_string(r.recruiter) +
                                            " does not appear before respondent " +
                                            std::to_string(r.respondent));
            c[static_cast<int>(it->second)][static_cast<int>(r.trait)] += r.out_degree;
        }
        trait_of[r.respondent] = r.trait;
    }
    const double from_a = c[0][0] + c[0][1];
    const double from_b = c[1][0] + c[1][1];
    if (from_a == 0) throw std::domain_error("adjusted recruitment matrix: group A made no recruitments");
    if (from_b == 0) throw std::domain_error("adjusted recruitment matrix: group B made no recruitments");
    return {c[0][0] / from_a, c[0][1] / from_a, c[1][0] / from_b, c[1][1] / from_b};
}

}  // namespace rdslab
