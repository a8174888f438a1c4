#include "rdslab/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "rdslab/rng.hpp"

namespace rdslab {

RdsSample run_rds(const DirectedGraph& g, const SamplerConfig& cfg) {
    const std::uint32_t n = g.node_count();
    if (cfg.seed_count == 0 || cfg.coupons_per_respondent == 0 || cfg.target_sample_size == 0)
        throw std::invalid_argument("sampler: seeds, coupons and sample size must be positive");
    if (!cfg.with_replacement && cfg.target_sample_size > n)
        throw std::invalid_argument("sampler: sample size exceeds population without replacement");
    if (!g.has_traits()) throw std::invalid_argument("sampler: graph has no traits");
    if (!is_strongly_connected(g)) throw std::invalid_argument("sampler: graph is not strongly connected");

    Rng rng(cfg.rng_seed);
    RdsSample sample;
    sample.config = cfg;
    sample.records.reserve(cfg.target_sample_size);

    std::vector<std::uint8_t> sampled(n, 0);
    std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;  // (node, wave)

    auto admit = [&](std::uint32_t node, std::int64_t recruiter, std::uint32_t wave) {
        sample.records.push_back(
            {node, recruiter, wave, g.out_degree(node), g.in_degree(node), g.trait(node)});
        if (!cfg.with_replacement) sampled[node] = 1;
        queue.emplace_back(node, wave);
    };

    auto inject_seed = [&] {
        if (cfg.with_replacement) {
            admit(static_cast<std::uint32_t>(rng.below(n)), -1, 0);
            return;
        }
        std::uint32_t node;
        do {
            node = static_cast<std::uint32_t>(rng.below(n));
        } while (sampled[node]);
        admit(node, -1, 0);
    };

    for (std::uint32_t s = 0; s < cfg.seed_count && sample.size() < cfg.target_sample_size; ++s)
        inject_seed();

    std::vector<std::uint32_t> eligible;
    while (sample.size() < cfg.target_sample_size) {
        if (queue.empty()) {
            inject_seed();  // every chain died; restart from a fresh seed
            continue;
        }
        const auto [recruiter, wave] = queue.front();
        queue.pop_front();
        for (std::uint32_t coupon = 0;
             coupon < cfg.coupons_per_respondent && sample.size() < cfg.target_sample_size; ++coupon) {
            const auto& nbrs = g.out_neighbors(recruiter);
            if (cfg.with_replacement) {
                admit(nbrs[rng.index(nbrs.size())], recruiter, wave + 1);
                continue;
            }
            eligible.clear();
            for (std::uint32_t v : nbrs)
                if (!sampled[v]) eligible.push_back(v);
            if (eligible.empty()) break;  // remaining coupons are forfeited
            admit(eligible[rng.index(eligible.size())], recruiter, wave + 1);
        }
    }
    return sample;
}

RecruitmentMatrix sample_recruitment_matrix(const RdsSample& s) {
    std::unordered_map<std::int64_t, Trait> last_trait;
    double c[2][2] = {{0, 0}, {0, 0}};
    for (const auto& r : s.records) {
        if (r.recruiter >= 0) {
            auto it = last_trait.find(r.recruiter);
            if (it == last_trait.end())
                throw std::invalid_argument("sample: recruiter " + std::to_string(r.recruiter) +
                                            " does not appear before respondent " +
                                            std::to_string(r.respondent));
            c[static_cast<int>(it->second)][static_cast<int>(r.trait)] += 1.0;
        }
        last_trait[r.respondent] = r.trait;
    }
    const double from_a = c[0][0] + c[0][1];
    const double from_b = c[1][0] + c[1][1];
    if (from_a == 0) throw std::domain_error("sample recruitment matrix: group A made no recruitments");
    if (from_b == 0) throw std::domain_error("sample recruitment matrix: group B made no recruitments");
    return {c[0][0] / from_a, c[0][1] / from_a, c[1][0] / from_b, c[1][1] / from_b};
}

GroupDegreeSummary sample_group_counts_and_degrees(const RdsSample& s) {
    GroupDegreeSummary out{};
    double inv_out[2] = {0, 0}, inv_in[2] = {0, 0};
    double sum_out[2] = {0, 0}, sum_in[2] = {0, 0};
    for (const auto& r : s.records) {
        const int t = static_cast<int>(r.trait);
        if (r.out_degree == 0) throw std::domain_error("sample: zero out-degree record");
        inv_out[t] += 1.0 / r.out_degree;
        sum_out[t] += r.out_degree;
        if (s.has_in_degrees) {
            if (r.in_degree == 0) throw std::domain_error("sample: zero in-degree record");
            inv_in[t] += 1.0 / r.in_degree;
            sum_in[t] += r.in_degree;
        }
    }
    out.n_a = s.count(Trait::A);
    out.n_b = static_cast<std::uint32_t>(s.size()) - out.n_a;
    if (out.n_a == 0 || out.n_b == 0) throw std::domain_error("sample: a trait group is empty");
    out.harmonic_out_a = out.n_a / inv_out[0];
    out.harmonic_out_b = out.n_b / inv_out[1];
    out.mean_out_a = sum_out[0] / out.n_a;
    out.mean_out_b = sum_out[1] / out.n_b;
    if (s.has_in_degrees) {
        out.harmonic_in_a = out.n_a / inv_in[0];
        out.harmonic_in_b = out.n_b / inv_in[1];
        out.mean_in_a = sum_in[0] / out.n_a;
        out.mean_in_b = sum_in[1] / out.n_b;
    } else {
        out.harmonic_in_a = out.harmonic_in_b = std::numeric_limits<double>::quiet_NaN();
        out.mean_in_a = out.mean_in_b = std::numeric_limits<double>::quiet_NaN();
    }
    return out;
}

void write_sample_csv(const RdsSample& s, std::ostream& out) {
    if (s.has_in_degrees)
        out << "respondent,recruiter,wave,out_degree,in_degree,trait\n";
    else
        out << "respondent,recruiter,wave,out_degree,trait\n";
    for (const auto& r : s.records) {
        out << r.respondent << ',' << r.recruiter << ',' << r.wave << ',' << r.out_degree;
        if (s.has_in_degrees) out << ',' << r.in_degree;
        out << ',' << to_char(r.trait) << '\n';
    }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) {
        while (!field.empty() && (field.back() == '\r' || field.back() == ' ')) field.pop_back();
        std::size_t start = field.find_first_not_of(' ');
        fields.push_back(start == std::string::npos ? std::string() : field.substr(start));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::int64_t parse_int(const std::string& s, std::size_t line_no, const char* col) {
    try {
        std::size_t pos = 0;
        const std::int64_t v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": bad " + col +
                                 " value '" + s + "'");
    }
}

}  // namespace

RdsSample ingest_sample(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("sample csv: empty stream");
    const auto header = split_csv(line);

    const std::vector<std::string> with_in = {"respondent", "recruiter", "wave",
                                              "out_degree", "in_degree", "trait"};
    const std::vector<std::string> without_in = {"respondent", "recruiter", "wave", "out_degree",
                                                 "trait"};
    bool has_in;
    if (header == with_in)
        has_in = true;
    else if (header == without_in)
        has_in = false;
    else
        throw std::runtime_error("sample csv: unexpected header '" + line + "'");

    RdsSample s;
    s.has_in_degrees = has_in;

    // recruiter linkage: a non-seed's recruiter must already appear with the
    // preceding wave (with replacement a node id may recur at several waves)
    std::unordered_set<std::uint64_t> seen_at_wave;
    auto key = [](std::int64_t node, std::uint32_t wave) {
        return (static_cast<std::uint64_t>(node) << 24) ^ wave;
    };

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw std::runtime_error("sample csv line " + std::to_string(line_no) +
                                     ": expected " + std::to_string(header.size()) + " fields");
        RdsRecord r{};
        const std::int64_t respondent = parse_int(fields[0], line_no, "respondent");
        if (respondent < 0)
            throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": negative respondent id");
        r.respondent = static_cast<std::uint32_t>(respondent);
        r.recruiter = parse_int(fields[1], line_no, "recruiter");
        const std::int64_t wave = parse_int(fields[2], line_no, "wave");
        const std::int64_t dout = parse_int(fields[3], line_no, "out_degree");
        std::int64_t din = 0;
        std::size_t trait_col = 4;
        if (has_in) {
            din = parse_int(fields[4], line_no, "in_degree");
            trait_col = 5;
        }
        if (wave < 0) throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": negative wave");
        if (dout <= 0 || (has_in && din <= 0))
            throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": degrees must be positive");
        if (fields[trait_col].size() != 1)
            throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": bad trait field");
        r.wave = static_cast<std::uint32_t>(wave);
        r.out_degree = static_cast<std::uint32_t>(dout);
        r.in_degree = static_cast<std::uint32_t>(din);
        r.trait = trait_from_char(fields[trait_col][0]);

        if (r.recruiter < -1)
            throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": bad recruiter id");
        if (r.recruiter == -1) {
            if (r.wave != 0)
                throw std::runtime_error("sample csv line " + std::to_string(line_no) +
                                         ": seed record must have wave 0");
        } else {
            if (r.wave == 0)
                throw std::runtime_error("sample csv line " + std::to_string(line_no) +
                                         ": non-seed record with wave 0");
            if (!seen_at_wave.count(key(r.recruiter, r.wave - 1)))
                throw std::runtime_error("sample csv line " + std::to_string(line_no) + ": recruiter " +
                                         std::to_string(r.recruiter) +
                                         " not seen earlier at wave " + std::to_string(r.wave - 1));
        }
        seen_at_wave.insert(key(r.respondent, r.wave));
        s.records.push_back(r);
    }
    if (s.records.empty()) throw std::runtime_error("sample csv: no records");
    return s;
}

}  // namespace rdslab
