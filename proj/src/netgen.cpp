#include "rdslab/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rdslab/metrics.hpp"

namespace rdslab {

NetFamily family_from_string(const std::string& s) {
    if (s == "net1" || s == "Net1") return NetFamily::Net1;
    if (s == "net2" || s == "Net2") return NetFamily::Net2;
    if (s == "net3" || s == "Net3") return NetFamily::Net3;
    throw std::invalid_argument("unknown network family '" + s + "'");
}

std::string to_string(NetFamily f) {
    switch (f) {
        case NetFamily::Net1: return "net1";
        case NetFamily::Net2: return "net2";
        default: return "net3";
    }
}

void GenTarget::validate() const {
    if (max_restarts < 1) throw std::invalid_argument("gen target: max_restarts must be >= 1");
    if (family == NetFamily::Net3) {
        if (!assortativity_target)
            throw std::invalid_argument("gen target: net3 requires an assortativity target");
        return;  // remaining fields come from the base graph
    }
    if (node_count < 3) throw std::invalid_argument("gen target: need at least 3 nodes");
    if (mean_degree <= 0) throw std::invalid_argument("gen target: mean degree must be positive");
    if (proportion_a <= 0 || proportion_a >= 1)
        throw std::invalid_argument("gen target: proportion_a must be in (0, 1)");
    if (attractivity_target <= 0)
        throw std::invalid_argument("gen target: attractivity target must be positive");
    const double lt = directedness_target;
    if (lt < 0 || lt > 1) throw std::invalid_argument("gen target: directedness target outside [0, 1]");
    if (family == NetFamily::Net1 && lt > 1e-12 && lt < 0.2 - 1e-12)
        throw std::invalid_argument(
            "gen target: net1 directedness target must be 0 or in [0.2, 1] (rewiring floor)");
    if (family == NetFamily::Net1 && homophily_target)
        throw std::invalid_argument("gen target: homophily target is a net2 parameter");
    if (family == NetFamily::Net2 && homophily_target &&
        (*homophily_target < -1e-9 || *homophily_target > 0.5 + 1e-9))
        throw std::invalid_argument("gen target: homophily target outside [0, 0.5]");
    const bool undirected_base = family == NetFamily::Net2 || lt <= 1e-12;
    if (undirected_base) {
        const double total = static_cast<double>(node_count) * mean_degree;
        const auto rounded = std::llround(total);
        if (std::abs(total - static_cast<double>(rounded)) > 1e-9 || rounded % 2 != 0)
            throw std::invalid_argument(
                "gen target: node_count * mean_degree must be an even integer for reciprocal-pair placement");
    }
}

DirectedGraph gen_random_directed(std::uint32_t n, double mean_degree, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random directed graph: need at least 2 nodes");
    const auto e_target = static_cast<std::uint64_t>(std::llround(n * mean_degree));
    if (e_target == 0) throw std::invalid_argument("random directed graph: zero edges requested");
    const std::uint64_t max_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (e_target > max_pairs)
        throw std::invalid_argument("random directed graph: density infeasible, " +
                                    std::to_string(e_target) + " unreciprocated edges do not fit in " +
                                    std::to_string(max_pairs) + " node pairs");

    DirectedGraph g(n);
    std::uint64_t failures = 0;
    const std::uint64_t failure_budget = 100 * e_target + 1000;
    while (g.edge_count() < e_target) {
        const auto u = static_cast<std::uint32_t>(rng.below(n));
        const auto v = static_cast<std::uint32_t>(rng.below(n));
        if (u == v || g.has_edge(u, v) || g.has_edge(v, u)) {
            if (++failures > failure_budget)
                throw std::runtime_error("random directed graph: placement stalled, density too high");
            continue;
        }
        g.add_edge(u, v);
    }
    return g;
}

DirectedGraph gen_random_undirected(std::uint32_t n, double mean_degree, Rng& rng) {
    if (n < 2) throw std::invalid_argument("random undirected graph: need at least 2 nodes");
    const double total = n * mean_degree;
    const auto e_total = static_cast<std::uint64_t>(std::llround(total));
    if (std::abs(total - static_cast<double>(e_total)) > 1e-9 || e_total % 2 != 0 || e_total == 0)
        throw std::invalid_argument("random undirected graph: node_count * mean_degree must be a positive even integer");
    const std::uint64_t pair_target = e_total / 2;
    const std::uint64_t max_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (pair_target > max_pairs)
        throw std::invalid_argument("random undirected graph: density infeasible");

    DirectedGraph g(n);
    std::uint64_t placed = 0, failures = 0;
    const std::uint64_t failure_budget = 100 * pair_target + 1000;
    while (placed < pair_target) {
        const auto u = static_cast<std::uint32_t>(rng.below(n));
        const auto v = static_cast<std::uint32_t>(rng.below(n));
        if (u == v || g.has_edge(u, v)) {
            if (++failures > failure_budget)
                throw std::runtime_error("random undirected graph: placement stalled, density too high");
            continue;
        }
        g.add_edge(u, v);
        g.add_edge(v, u);
        ++placed;
    }
    return g;
}

namespace {

std::uint64_t count_unreciprocated(const DirectedGraph& g) {
    std::uint64_t c = 0;
    for (const auto& e : g.edges())
        if (!g.has_edge(e.to, e.from)) ++c;
    return c;
}

[[noreturn]] void unreachable_target(const char* what) {
    throw std::runtime_error(std::string(what) + ": target unreachable, candidate draws exhausted");
}

}  // namespace

namespace {

// One reciprocation step anchored at the unreciprocated edge i->j: move an
// unreciprocated in-edge of i and out-edge of j so that j->i can be added.
// Returns the change in the unreciprocated-edge count (0 when no valid
// candidate pair exists at this anchor).
int net1_step(DirectedGraph& g, std::uint32_t i, std::uint32_t j, Rng& rng,
              std::vector<std::uint32_t>& in_candidates, std::vector<std::uint32_t>& out_candidates) {
    in_candidates.clear();
    for (std::uint32_t k : g.in_neighbors(i))
        if (!g.has_edge(i, k)) in_candidates.push_back(k);
    if (in_candidates.empty()) return 0;
    out_candidates.clear();
    for (std::uint32_t l : g.out_neighbors(j))
        if (!g.has_edge(l, j)) out_candidates.push_back(l);
    if (out_candidates.empty()) return 0;

    // uniform draw first; fall back to a full scan of the candidate pairs so
    // an anchor is only abandoned when it truly has no simple rewire
    std::uint32_t k = in_candidates[rng.index(in_candidates.size())];
    std::uint32_t l = out_candidates[rng.index(out_candidates.size())];
    if (k == l || g.has_edge(k, l)) {
        bool found = false;
        const std::size_t ko = rng.index(in_candidates.size());
        const std::size_t lo = rng.index(out_candidates.size());
        for (std::size_t a = 0; a < in_candidates.size() && !found; ++a) {
            for (std::size_t b = 0; b < out_candidates.size() && !found; ++b) {
                k = in_candidates[(a + ko) % in_candidates.size()];
                l = out_candidates[(b + lo) % out_candidates.size()];
                found = k != l && !g.has_edge(k, l);
            }
        }
        if (!found) return 0;
    }

    g.remove_edge(k, i);
    g.remove_edge(j, l);
    g.add_edge(j, i);  // completes the reciprocal pair i <-> j
    g.add_edge(k, l);
    return g.has_edge(l, k) ? 4 : 2;
}

}  // namespace

void reduce_directedness_net1(DirectedGraph& g, double lambda_target, Rng& rng, RewireStats* stats) {
    if (lambda_target < 0.2 - 1e-12 || lambda_target > 1 + 1e-12)
        throw std::invalid_argument("net1 rewiring reaches down to directedness 0.2; target outside [0.2, 1]");
    const std::uint64_t e_total = g.edge_count();
    const auto target_count = static_cast<std::uint64_t>(std::llround(lambda_target * static_cast<double>(e_total)));
    std::uint64_t dir_count = count_unreciprocated(g);

    std::vector<std::uint32_t> in_candidates, out_candidates;
    int escapes = 0;
    while (dir_count > target_count) {
        // forward phase: quick uniform anchors, then a full sweep before
        // concluding the process is absorbed
        int consecutive_failures = 0;
        bool absorbed = false;
        while (dir_count > target_count) {
            if (consecutive_failures > 1000) {
                bool progressed = false;
                const std::size_t offset = rng.index(g.edge_count());
                for (std::size_t step = 0; step < e_total && dir_count > target_count; ++step) {
                    const auto e = g.edge_at((offset + step) % g.edge_count());
                    if (g.has_edge(e.to, e.from)) continue;
                    const int delta = net1_step(g, e.from, e.to, rng, in_candidates, out_candidates);
                    if (delta > 0) {
                        dir_count -= delta;
                        progressed = true;
                        if (stats) ++stats->directedness_steps;
                    }
                }
                if (!progressed) {
                    absorbed = true;
                    break;
                }
                consecutive_failures = 0;
                continue;
            }
            ++consecutive_failures;

            const auto anchor = g.edge_at(rng.index(g.edge_count()));
            if (g.has_edge(anchor.to, anchor.from)) continue;
            const int delta = net1_step(g, anchor.from, anchor.to, rng, in_candidates, out_candidates);
            if (delta == 0) continue;
            dir_count -= delta;
            consecutive_failures = 0;
            if (stats) ++stats->directedness_steps;
        }
        if (dir_count <= target_count) break;
        if (!absorbed) continue;

        // Near the floor the surviving unreciprocated edges are isolated and
        // no anchor has both candidates. Reshuffle with inverse steps (break
        // reciprocal pairs back apart; exact inverse of net1_step, so every
        // degree pair is preserved) and descend again.
        const double floor_lambda = static_cast<double>(dir_count) / static_cast<double>(e_total);
        if (floor_lambda - lambda_target <= 0.005) break;  // already within the contract tolerance
        if (++escapes > 50) unreachable_target("net1 directedness rewiring");

        const std::uint64_t lift = std::max<std::uint64_t>(e_total / 50, 200);
        std::uint64_t lifted = 0, guard = 0;
        while (lifted < lift && guard < 1000000) {
            ++guard;
            const auto pair_edge = g.edge_at(rng.index(g.edge_count()));
            const std::uint32_t i = pair_edge.to, j = pair_edge.from;  // j->i is removed below
            if (!g.has_edge(i, j)) continue;
            const auto moved = g.edge_at(rng.index(g.edge_count()));
            const std::uint32_t k = moved.from, l = moved.to;
            if (g.has_edge(l, k)) continue;  // need an unreciprocated edge to relocate
            if (k == i || g.has_edge(k, i) || j == l || g.has_edge(j, l)) continue;
            g.remove_edge(j, i);
            g.remove_edge(k, l);
            g.add_edge(k, i);
            g.add_edge(j, l);
            lifted += 2;
            if (stats) ++stats->directedness_steps;
        }
        dir_count = count_unreciprocated(g);
    }
}

void increase_directedness_net2(DirectedGraph& g, double lambda_target, Rng& rng, RewireStats* stats) {
    if (lambda_target < 0 || lambda_target > 1 + 1e-12)
        throw std::invalid_argument("net2 directedness target outside [0, 1]");
    const std::uint32_t n = g.node_count();
    const std::uint64_t e_total = g.edge_count();
    const auto target_count = static_cast<std::uint64_t>(std::llround(lambda_target * static_cast<double>(e_total)));
    std::uint64_t dir_count = count_unreciprocated(g);

    int consecutive_failures = 0;
    while (dir_count < target_count) {
        if (consecutive_failures > 1000) unreachable_target("net2 directedness rewiring");
        ++consecutive_failures;

        const auto& pair_edge = g.edge_at(rng.index(g.edge_count()));
        const std::uint32_t i = pair_edge.from, j = pair_edge.to;
        if (!g.has_edge(j, i)) continue;

        const auto k = static_cast<std::uint32_t>(rng.below(n));
        const auto l = static_cast<std::uint32_t>(rng.below(n));
        if (k == l || g.has_edge(k, l) || g.has_edge(l, k)) continue;

        if (rng.coin())
            g.remove_edge(i, j);
        else
            g.remove_edge(j, i);
        g.add_edge(k, l);
        dir_count += 2;  // the surviving pair member plus the new edge
        consecutive_failures = 0;
        if (stats) ++stats->directedness_steps;
    }
}

void assign_traits_attractivity(DirectedGraph& g, double proportion_a, double m_target, Rng& rng,
                                RewireStats* stats) {
    if (proportion_a <= 0 || proportion_a >= 1)
        throw std::invalid_argument("trait assignment: proportion_a must be in (0, 1)");
    if (m_target <= 0) throw std::invalid_argument("trait assignment: attractivity target must be positive");
    const std::uint32_t n = g.node_count();
    const auto n_a = static_cast<std::uint32_t>(static_cast<double>(n) * proportion_a);
    if (n_a == 0 || n_a == n)
        throw std::invalid_argument("trait assignment: proportion_a leaves an empty group");

    std::vector<std::uint32_t> nodes(n);
    std::iota(nodes.begin(), nodes.end(), 0);
    for (std::uint32_t i = 0; i < n_a; ++i)
        std::swap(nodes[i], nodes[i + rng.index(n - i)]);
    std::vector<Trait> traits(n, Trait::B);
    std::vector<std::uint32_t> group_a(nodes.begin(), nodes.begin() + n_a);
    std::vector<std::uint32_t> group_b(nodes.begin() + n_a, nodes.end());
    for (std::uint32_t v : group_a) traits[v] = Trait::A;
    g.assign_traits(std::move(traits));

    double in_sum_a = 0, in_sum_b = 0;
    for (std::uint32_t v : group_a) in_sum_a += g.in_degree(v);
    for (std::uint32_t v : group_b) in_sum_b += g.in_degree(v);
    if (in_sum_b == 0 || in_sum_a == 0)
        throw std::runtime_error("trait assignment: a group has zero total indegree");

    const double n_b = static_cast<double>(n - n_a);
    auto ratio = [&] { return (in_sum_a / n_a) / (in_sum_b / n_b); };
    const double tol = 0.01;

    const std::uint64_t swap_budget = 200ull * n + 10000;
    for (std::uint64_t it = 0; std::abs(ratio() - m_target) > tol; ++it) {
        if (it > swap_budget)
            throw std::runtime_error("trait assignment: attractivity target unreachable for this degree sequence");
        const std::size_t ia = rng.index(group_a.size());
        const std::size_t ib = rng.index(group_b.size());
        const std::uint32_t va = group_a[ia], vb = group_b[ib];
        const double da = g.in_degree(va), db = g.in_degree(vb);
        const double m_now = ratio();
        const bool swap_helps = (m_now > m_target && da > db) || (m_now < m_target && da < db);
        if (!swap_helps) continue;
        group_a[ia] = vb;
        group_b[ib] = va;
        g.set_trait(va, Trait::B);
        g.set_trait(vb, Trait::A);
        in_sum_a += db - da;
        in_sum_b += da - db;
        if (stats) ++stats->trait_swaps;
    }
}

void rewire_homophily(DirectedGraph& g, double h_target, Rng& rng, RewireStats* stats) {
    if (!g.has_traits()) throw std::invalid_argument("homophily rewiring: graph has no traits");
    if (h_target < -1e-9 || h_target > 0.5 + 1e-9)
        throw std::invalid_argument("homophily rewiring: target outside [0, 0.5]");
    const std::uint32_t n = g.node_count();
    const std::uint32_t n_a = g.count_trait(Trait::A);
    if (n_a == 0 || n_a == n) throw std::invalid_argument("homophily rewiring: a group is empty");
    const double p_b = static_cast<double>(n - n_a) / n;

    double out_a = 0;  // total A-origin edges; invariant under the rewiring
    double within_a = 0;
    for (const auto& e : g.edges()) {
        if (g.trait(e.from) != Trait::A) continue;
        ++out_a;
        if (g.trait(e.to) == Trait::A) ++within_a;
    }
    if (out_a == 0) throw std::invalid_argument("homophily rewiring: group A has no outgoing edges");
    auto current_h = [&] { return 1.0 - ((out_a - within_a) / out_a) / p_b; };

    const double tol = 0.005;
    auto draw_matching = [&](bool want_within_a, bool want_a_origin, std::optional<bool> want_reciprocal,
                             std::uint32_t& from, std::uint32_t& to) {
        // want_within_a: both endpoints same group; orientation fixed so A is
        // the "from" group of pattern 1 and B of pattern 2.
        for (int attempt = 0; attempt < 200; ++attempt) {
            const auto& e = g.edge_at(rng.index(g.edge_count()));
            const Trait tf = g.trait(e.from), tt = g.trait(e.to);
            const Trait origin = want_a_origin ? Trait::A : Trait::B;
            const Trait end = want_within_a ? origin : (origin == Trait::A ? Trait::B : Trait::A);
            if (tf != origin || tt != end) continue;
            if (want_reciprocal && g.has_edge(e.to, e.from) != *want_reciprocal) continue;
            from = e.from;
            to = e.to;
            return true;
        }
        return false;
    };

    int consecutive_failures = 0;
    while (std::abs(current_h() - h_target) > tol) {
        if (consecutive_failures > 5000) unreachable_target("homophily rewiring");
        ++consecutive_failures;

        const bool decrease = current_h() > h_target;
        // decrease: one within-A and one within-B edge become two cross
        // edges; increase: one A->B and one B->A edge become within edges.
        std::uint32_t a, b, c, d;
        if (!draw_matching(decrease, true, std::nullopt, a, b)) continue;
        const bool reciprocal = g.has_edge(b, a);
        if (!draw_matching(decrease, false, reciprocal, c, d)) continue;

        if (a == d || c == b) continue;
        if (g.has_edge(a, d) || g.has_edge(d, a) || g.has_edge(c, b) || g.has_edge(b, c)) continue;

        g.remove_edge(a, b);
        g.remove_edge(c, d);
        g.add_edge(a, d);
        g.add_edge(c, b);
        if (reciprocal) {
            g.remove_edge(b, a);
            g.remove_edge(d, c);
            g.add_edge(d, a);
            g.add_edge(b, c);
        }
        const double shift = reciprocal ? 2 : 1;
        within_a += decrease ? -shift : shift;
        consecutive_failures = 0;
        if (stats) ++stats->homophily_steps;
    }
}

void rewire_assortativity_net3(DirectedGraph& g, double gamma_target, Rng& rng, RewireStats* stats) {
    if (!g.has_traits()) throw std::invalid_argument("assortativity rewiring: graph has no traits");
    const std::uint64_t e_total = g.edge_count();
    if (e_total < 2) throw std::invalid_argument("assortativity rewiring: need at least two edges");

    std::vector<double> din(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v) din[v] = g.in_degree(v);

    // Target swaps keep every indegree and the endpoint-degree marginals
    // fixed; only the product sum moves.
    double sum_jk = 0, sum_half = 0, sum_half_sq = 0;
    for (const auto& e : g.edges()) {
        const double j = din[e.from], k = din[e.to];
        sum_jk += j * k;
        sum_half += 0.5 * (j + k);
        sum_half_sq += 0.5 * (j * j + k * k);
    }
    const double inv_e = 1.0 / static_cast<double>(e_total);
    const double mu = sum_half * inv_e;
    const double denom = sum_half_sq * inv_e - mu * mu;
    if (denom <= 0) throw std::domain_error("assortativity rewiring: indegree variance is zero");
    auto gamma = [&] { return (sum_jk * inv_e - mu * mu) / denom; };

    if (gamma() >= gamma_target - 1e-12) {
        if (gamma_target < gamma() - 1e-9)
            throw std::invalid_argument("assortativity rewiring only increases the correlation; target below current");
        return;
    }

    std::uint64_t attempts_without_progress = 0;
    while (gamma() < gamma_target) {
        if (++attempts_without_progress > 2000000)
            unreachable_target("assortativity rewiring");
        const std::size_t e1 = rng.index(g.edge_count());
        const std::size_t e2 = rng.index(g.edge_count());
        if (e1 == e2) continue;
        const auto [i, j] = g.edge_at(e1);
        const auto [k, l] = g.edge_at(e2);
        if (g.trait(j) != g.trait(l)) continue;
        const double a = din[i], b = din[j], c = din[k], d = din[l];
        const bool two_largest = std::min(a, d) >= std::max(b, c);
        const bool two_smallest = std::max(a, d) <= std::min(b, c);
        if (!two_largest && !two_smallest) continue;
        if (i == l || k == j || g.has_edge(i, l) || g.has_edge(k, j)) continue;

        g.remove_edge(i, j);
        g.remove_edge(k, l);
        g.add_edge(i, l);
        g.add_edge(k, j);
        const double delta = (a - c) * (d - b);
        sum_jk += delta;
        if (delta > 0) attempts_without_progress = 0;
        if (stats) ++stats->assortativity_steps;
    }
}

DirectedGraph generate(const GenTarget& target, RewireStats* stats) {
    target.validate();
    if (target.family == NetFamily::Net3)
        throw std::invalid_argument("net3 generation needs a base graph; use generate_net3");

    std::string last_failure = "disconnected output";
    for (int attempt = 0; attempt < target.max_restarts; ++attempt) {
        if (stats && attempt > 0) ++stats->restarts;
        Rng rng(Rng::mix(target.rng_seed, static_cast<std::uint64_t>(attempt)));
        try {
            DirectedGraph g;
            const double lt = target.directedness_target;
            if (target.family == NetFamily::Net1) {
                g = lt <= 1e-12 ? gen_random_undirected(target.node_count, target.mean_degree, rng)
                                : gen_random_directed(target.node_count, target.mean_degree, rng);
                if (!is_strongly_connected(g)) continue;
                if (lt > 1e-12 && lt < 1 - 1e-12) {
                    reduce_directedness_net1(g, lt, rng, stats);
                    if (!is_strongly_connected(g)) continue;
                }
                assign_traits_attractivity(g, target.proportion_a, target.attractivity_target, rng, stats);
            } else {
                g = gen_random_undirected(target.node_count, target.mean_degree, rng);
                if (!is_strongly_connected(g)) continue;
                if (lt > 1e-12) {
                    increase_directedness_net2(g, lt, rng, stats);
                    if (!is_strongly_connected(g)) continue;
                }
                assign_traits_attractivity(g, target.proportion_a, target.attractivity_target, rng, stats);
                if (target.homophily_target) {
                    rewire_homophily(g, *target.homophily_target, rng, stats);
                    if (!is_strongly_connected(g)) continue;
                }
            }
            return g;
        } catch (const std::runtime_error& err) {
            last_failure = err.what();  // stochastic failure; retry with a fresh substream
        }
    }
    throw std::runtime_error("generation failed after " + std::to_string(target.max_restarts) +
                             " restarts; last failure: " + last_failure);
}

DirectedGraph generate_net3(const DirectedGraph& base, const GenTarget& target, RewireStats* stats) {
    target.validate();
    if (target.family != NetFamily::Net3)
        throw std::invalid_argument("generate_net3 expects a net3 target");
    if (!base.has_traits()) throw std::invalid_argument("net3 generation: base graph has no traits");

    std::string last_failure = "disconnected output";
    for (int attempt = 0; attempt < target.max_restarts; ++attempt) {
        if (stats && attempt > 0) ++stats->restarts;
        Rng rng(Rng::mix(target.rng_seed, static_cast<std::uint64_t>(attempt)));
        try {
            DirectedGraph g = base;
            rewire_assortativity_net3(g, *target.assortativity_target, rng, stats);
            if (!is_strongly_connected(g)) continue;
            return g;
        } catch (const std::runtime_error& err) {
            last_failure = err.what();
        }
    }
    throw std::runtime_error("net3 generation failed after " + std::to_string(target.max_restarts) +
                             " restarts; last failure: " + last_failure);
}

}  // namespace rdslab
