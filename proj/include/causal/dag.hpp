#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "causal/error.hpp"
#include "causal/vertex_set.hpp"

namespace causal {

using Vertex = std::size_t;
using Edge = std::pair<std::string, std::string>;

// Immutable directed acyclic graph over named vertices. Vertex indices follow
// declaration order, and parent/child lists are kept in index order.
class Dag {
public:
    Dag() = default;

    // Throws DuplicateVertex, UnknownVertex or Cycle.
    Dag(std::vector<std::string> vertices, const std::vector<Edge>& edges);

    std::size_t size() const noexcept { return names_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    const std::vector<std::string>& vertices() const noexcept { return names_; }
    const std::string& name(Vertex v) const { return names_.at(v); }

    bool contains(std::string_view name) const;
    std::optional<Vertex> find(std::string_view name) const;
    // Throws UnknownVertex.
    Vertex index(std::string_view name) const;

    const std::vector<Vertex>& parent_ids(Vertex v) const { return parents_.at(v); }
    const std::vector<Vertex>& child_ids(Vertex v) const { return children_.at(v); }
    bool has_edge(std::string_view tail, std::string_view head) const;

    // Edges ordered by (tail index, head index).
    std::vector<Edge> edges() const;

    // Copy of this graph keeping only the edges for which keep(tail, head) holds.
    Dag filter_edges(const std::function<bool(Vertex, Vertex)>& keep) const;

    // Index-order membership mask for a set, throwing UnknownVertex.
    std::vector<char> mask(const VertexSet& s) const;
    VertexSet from_mask(const std::vector<char>& m) const;

    bool operator==(const Dag& other) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::size_t edge_count_ = 0;
};

// Designated treatments (temporal order) and a single outcome.
struct Query {
    std::vector<std::string> treatments;
    std::string outcome;

    VertexSet treatment_set() const { return to_set(treatments); }
    bool point() const { return treatments.size() == 1; }
    const std::string& treatment() const { return treatments.front(); }
};

// Validates distinctness, membership and topological order of the treatments.
Query make_query(const Dag& g, std::vector<std::string> treatments, std::string outcome);

Dag parse_dag(std::string_view text);
// Round-trips through parse_dag.
std::string format_dag(const Dag& g);

VertexSet parents(const Dag& g, const VertexSet& s);
VertexSet children(const Dag& g, const VertexSet& s);
VertexSet ancestors(const Dag& g, const VertexSet& s);
VertexSet descendants(const Dag& g, const VertexSet& s);
VertexSet non_descendants(const Dag& g, const VertexSet& s);
VertexSet all_vertices(const Dag& g);

// Kahn's algorithm over the whole graph with ties broken by declaration order,
// restricted to `subset`.
std::vector<std::string> topological_sort(const Dag& g, const VertexSet& subset);
std::vector<std::string> topological_sort(const Dag& g);

// Requires pairwise disjoint arguments; throws InvalidArgument otherwise.
bool d_separated(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z);

// Conditional independence statement X _||_ Y | Z read off the graph, with
// overlapping arguments allowed: members of Z are dropped from X and Y, a
// remaining overlap between X and Y is never separated, and an empty side is
// always separated.
bool independent(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z);

// Vertices reachable from x along paths that are active given z.
VertexSet d_connected(const Dag& g, const VertexSet& x, const VertexSet& z);

// One path between x and y that is open given z, or nullopt.
std::optional<std::vector<std::string>> open_path(const Dag& g, const VertexSet& x,
                                                  const VertexSet& y, const VertexSet& z);

Dag exogenize(const Dag& g, std::string_view u);
Dag induced_subgraph(const Dag& g, const VertexSet& keep);

}  // namespace causal
