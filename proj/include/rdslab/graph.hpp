#pragma once

#include <cstdint>
#include <iosfwd>
#include <unordered_map>
#include <vector>

namespace rdslab {

enum class Trait : std::uint8_t { A, B };

char to_char(Trait t);
Trait trait_from_char(char c);  // throws std::invalid_argument on anything but 'A'/'B'

// Directed simple graph with an optional binary node trait.
//
// Invariants: no self-loops, at most one edge per ordered pair; a reciprocal
// tie is the pair i->j plus j->i. Edge storage supports O(1) membership and
// reciprocity tests, O(1) uniform random edge picks (edge_at), and O(d)
// neighbor enumeration, which is what the rewiring loops in netgen need.
//
// Generators mutate a graph they own during construction; everything
// downstream treats the finished graph as immutable, so const access is safe
// to share across threads.
class DirectedGraph {
public:
    struct Edge {
        std::uint32_t from, to;
    };

    DirectedGraph() = default;
    explicit DirectedGraph(std::uint32_t node_count);

    std::uint32_t node_count() const { return n_; }
    std::size_t edge_count() const { return edges_.size(); }

    bool has_edge(std::uint32_t from, std::uint32_t to) const {
        return edge_index_.find(key(from, to)) != edge_index_.end();
    }
    /// Inserts an edge; returns false if it already exists. Throws on
    /// self-loops and out-of-range endpoints.
    bool add_edge(std::uint32_t from, std::uint32_t to);
    /// Removes an existing edge; throws if absent.
    void remove_edge(std::uint32_t from, std::uint32_t to);

    const std::vector<std::uint32_t>& out_neighbors(std::uint32_t v) const { return out_[v]; }
    const std::vector<std::uint32_t>& in_neighbors(std::uint32_t v) const { return in_[v]; }
    std::uint32_t out_degree(std::uint32_t v) const { return static_cast<std::uint32_t>(out_[v].size()); }
    std::uint32_t in_degree(std::uint32_t v) const { return static_cast<std::uint32_t>(in_[v].size()); }

    /// Edge by dense index in [0, edge_count()); the index/edge association
    /// is not stable across mutations, which is fine for uniform picks.
    const Edge& edge_at(std::size_t index) const { return edges_[index]; }
    const std::vector<Edge>& edges() const { return edges_; }

    bool has_traits() const { return !traits_.empty(); }
    Trait trait(std::uint32_t v) const { return traits_[v]; }
    void set_trait(std::uint32_t v, Trait t) { traits_[v] = t; }
    void assign_traits(std::vector<Trait> traits);  // size must equal node_count
    std::uint32_t count_trait(Trait t) const;

    /// Original node labels from ingestion; empty means identity (0..N-1).
    const std::vector<std::int64_t>& labels() const { return labels_; }
    std::int64_t label_of(std::uint32_t v) const {
        return labels_.empty() ? static_cast<std::int64_t>(v) : labels_[v];
    }

    friend DirectedGraph load_graph(std::istream&, std::istream&);

private:
    static std::uint64_t key(std::uint32_t from, std::uint32_t to) {
        return (static_cast<std::uint64_t>(from) << 32) | to;
    }

    std::uint32_t n_ = 0;
    std::vector<Edge> edges_;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_index_;  // key -> index into edges_
    std::vector<std::vector<std::uint32_t>> out_, in_;
    std::vector<Trait> traits_;
    std::vector<std::int64_t> labels_;
};

/// True iff a directed path exists between every ordered pair of nodes
/// (forward + reverse reachability from node 0).
bool is_strongly_connected(const DirectedGraph& g);

/// Reads "i j" edge lines and "i A|B" trait lines ('#' comments and blank
/// lines ignored in both). Arbitrary integer labels are remapped to dense
/// 0..N-1 ids in sorted label order; already-contiguous inputs keep their
/// ids. Rejects self-loops, duplicate ordered pairs, empty edge lists, and
/// traits that are missing or refer to unknown nodes.
DirectedGraph load_graph(std::istream& edge_stream, std::istream& trait_stream);

/// Writes the formats load_graph reads, using original labels, edges sorted
/// by (from, to).
void save_graph(const DirectedGraph& g, std::ostream& edge_stream, std::ostream& trait_stream);

}  // namespace rdslab
