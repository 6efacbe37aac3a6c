#pragma once

#include <cstdint>
#include <string>

#include "causal/dag.hpp"

namespace causal::test {

// Reads figures/<name>.dag.
Dag load_figure(const std::string& name);
std::string figure_path(const std::string& name);
std::string read_text(const std::string& path);

// Reference d-separation by enumerating every simple path in the skeleton.
bool d_separated_by_paths(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z);

// Random DAG on vertices V0..V{n-1}, each forward pair joined with probability p.
Dag random_dag(std::size_t n, double p, std::uint64_t seed);

}  // namespace causal::test
