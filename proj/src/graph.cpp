#include "rdslab/graph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace rdslab {

char to_char(Trait t) { return t == Trait::A ? 'A' : 'B'; }

Trait trait_from_char(char c) {
    if (c == 'A') return Trait::A;
    if (c == 'B') return Trait::B;
    throw std::invalid_argument(std::string("invalid trait '") + c + "', expected A or B");
}

DirectedGraph::DirectedGraph(std::uint32_t node_count)
    : n_(node_count), out_(node_count), in_(node_count) {}

bool DirectedGraph::add_edge(std::uint32_t from, std::uint32_t to) {
    if (from >= n_ || to >= n_) throw std::out_of_range("edge endpoint out of range");
    if (from == to) throw std::invalid_argument("self-loops are not allowed");
    auto [it, inserted] = edge_index_.try_emplace(key(from, to), static_cast<std::uint32_t>(edges_.size()));
    if (!inserted) return false;
    edges_.push_back({from, to});
    out_[from].push_back(to);
    in_[to].push_back(from);
    return true;
}

namespace {

void erase_one(std::vector<std::uint32_t>& v, std::uint32_t value) {
    auto it = std::find(v.begin(), v.end(), value);
    *it = v.back();
    v.pop_back();
}

}  // namespace

void DirectedGraph::remove_edge(std::uint32_t from, std::uint32_t to) {
    auto it = edge_index_.find(key(from, to));
    if (it == edge_index_.end()) throw std::invalid_argument("remove_edge: edge not present");
    const std::uint32_t idx = it->second;
    edge_index_.erase(it);
    const Edge moved = edges_.back();
    edges_[idx] = moved;
    edges_.pop_back();
    if (idx < edges_.size()) edge_index_[key(moved.from, moved.to)] = idx;
    erase_one(out_[from], to);
    erase_one(in_[to], from);
}

void DirectedGraph::assign_traits(std::vector<Trait> traits) {
    if (traits.size() != n_) throw std::invalid_argument("trait vector size must equal node count");
    traits_ = std::move(traits);
}

std::uint32_t DirectedGraph::count_trait(Trait t) const {
    std::uint32_t c = 0;
    for (Trait x : traits_)
        if (x == t) ++c;
    return c;
}

bool is_strongly_connected(const DirectedGraph& g) {
    const std::uint32_t n = g.node_count();
    if (n == 0) return false;
    if (n == 1) return true;

    std::vector<std::uint8_t> seen(n, 0);
    std::vector<std::uint32_t> stack;
    auto sweep = [&](bool forward) {
        std::fill(seen.begin(), seen.end(), 0);
        stack.assign(1, 0);
        seen[0] = 1;
        std::uint32_t count = 1;
        while (!stack.empty()) {
            const std::uint32_t v = stack.back();
            stack.pop_back();
            for (std::uint32_t w : forward ? g.out_neighbors(v) : g.in_neighbors(v)) {
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    stack.push_back(w);
                }
            }
        }
        return count == n;
    };
    return sweep(true) && sweep(false);
}

namespace {

// Strips comments/whitespace; returns false for lines to skip.
bool next_tokens(std::istream& in, std::size_t& line_no, std::istringstream& tokens, std::string& line) {
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        tokens.clear();
        tokens.str(line);
        return true;
    }
    return false;
}

[[noreturn]] void parse_fail(const char* what, std::size_t line_no) {
    throw std::runtime_error(std::string(what) + " at line " + std::to_string(line_no));
}

}  // namespace

DirectedGraph load_graph(std::istream& edge_stream, std::istream& trait_stream) {
    std::vector<std::pair<std::int64_t, std::int64_t>> raw_edges;
    std::set<std::int64_t> labels;

    std::string line;
    std::istringstream tokens;
    std::size_t line_no = 0;
    while (next_tokens(edge_stream, line_no, tokens, line)) {
        std::int64_t a, b;
        std::string extra;
        if (!(tokens >> a >> b) || (tokens >> extra)) parse_fail("malformed edge line", line_no);
        if (a < 0 || b < 0) parse_fail("negative node id", line_no);
        if (a == b) parse_fail("self-loop", line_no);
        raw_edges.emplace_back(a, b);
        labels.insert(a);
        labels.insert(b);
    }
    if (raw_edges.empty()) throw std::runtime_error("empty graph: edge list has no edges");

    std::map<std::int64_t, std::uint32_t> id_of;
    std::vector<std::int64_t> label_list(labels.begin(), labels.end());
    for (std::size_t i = 0; i < label_list.size(); ++i) id_of[label_list[i]] = static_cast<std::uint32_t>(i);
    const bool contiguous = label_list.front() == 0 &&
                            label_list.back() == static_cast<std::int64_t>(label_list.size()) - 1;

    DirectedGraph g(static_cast<std::uint32_t>(label_list.size()));
    if (!contiguous) g.labels_ = label_list;
    for (std::size_t i = 0; i < raw_edges.size(); ++i) {
        if (!g.add_edge(id_of[raw_edges[i].first], id_of[raw_edges[i].second]))
            throw std::runtime_error("duplicate edge " + std::to_string(raw_edges[i].first) + " -> " +
                                     std::to_string(raw_edges[i].second));
    }

    std::vector<std::int8_t> trait_seen(g.node_count(), -1);
    line_no = 0;
    while (next_tokens(trait_stream, line_no, tokens, line)) {
        std::int64_t id;
        std::string t;
        std::string extra;
        if (!(tokens >> id >> t) || t.size() != 1 || (tokens >> extra))
            parse_fail("malformed trait line", line_no);
        auto it = id_of.find(id);
        if (it == id_of.end())
            throw std::runtime_error("trait line " + std::to_string(line_no) + " references unknown node " +
                                     std::to_string(id));
        trait_seen[it->second] = static_cast<std::int8_t>(trait_from_char(t[0]));
    }
    std::vector<Trait> traits(g.node_count());
    for (std::uint32_t v = 0; v < g.node_count(); ++v) {
        if (trait_seen[v] < 0)
            throw std::runtime_error("missing trait for node " + std::to_string(g.label_of(v)));
        traits[v] = static_cast<Trait>(trait_seen[v]);
    }
    g.assign_traits(std::move(traits));
    return g;
}

void save_graph(const DirectedGraph& g, std::ostream& edge_stream, std::ostream& trait_stream) {
    std::vector<DirectedGraph::Edge> sorted = g.edges();
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        return a.from != b.from ? a.from < b.from : a.to < b.to;
    });
    for (const auto& e : sorted)
        edge_stream << g.label_of(e.from) << ' ' << g.label_of(e.to) << '\n';
    if (g.has_traits()) {
        for (std::uint32_t v = 0; v < g.node_count(); ++v)
            trait_stream << g.label_of(v) << ' ' << to_char(g.trait(v)) << '\n';
    }
}

}  // namespace rdslab
