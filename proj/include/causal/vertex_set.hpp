#pragma once

#include <initializer_list>
#include <set>
#include <string>
#include <vector>

namespace causal {

// Vertex names with sorted iteration. Graph-independent, so sets computed on a
// pruned graph can be compared with sets computed on the original one.
using VertexSet = std::set<std::string>;

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
VertexSet set_symmetric_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& a, const VertexSet& b);
bool disjoint(const VertexSet& a, const VertexSet& b);
VertexSet with(VertexSet s, const std::string& v);
VertexSet without(VertexSet s, const std::string& v);
VertexSet to_set(const std::vector<std::string>& names);
std::vector<std::string> to_vector(const VertexSet& s);

// "{A,B}" rendering, used by text output and diagnostics.
std::string format_set(const VertexSet& s);

}  // namespace causal
