#include "support.hpp"

#include <fstream>
#include <functional>
#include <random>
#include <sstream>

namespace causal::test {

std::string figure_path(const std::string& name) {
    return std::string(FIGURES_DIR) + "/" + name;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Dag load_figure(const std::string& name) {
    return parse_dag(read_text(figure_path(name + ".dag")));
}

bool d_separated_by_paths(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z) {
    const std::size_t n = g.size();
    std::vector<char> in_z = g.mask(z), in_y = g.mask(y);
    // A collider is open when it or one of its descendants is conditioned on.
    std::vector<char> open_collider(n, 0);
    for (const auto& v : ancestors(g, z)) open_collider[g.index(v)] = 1;

    std::vector<char> on_path(n, 0);
    std::vector<Vertex> path;
    bool connected = false;

    std::function<void(Vertex)> walk = [&](Vertex v) {
        if (connected) return;
        if (path.size() > 1 && in_y[v]) {
            bool open = true;
            for (std::size_t i = 1; i + 1 < path.size() && open; ++i) {
                Vertex prev = path[i - 1], mid = path[i], next = path[i + 1];
                bool collider = g.has_edge(g.name(prev), g.name(mid)) && g.has_edge(g.name(next), g.name(mid));
                open = collider ? open_collider[mid] : !in_z[mid];
            }
            if (open) connected = true;
            return;
        }
        std::vector<Vertex> nbrs = g.parent_ids(v);
        nbrs.insert(nbrs.end(), g.child_ids(v).begin(), g.child_ids(v).end());
        for (Vertex w : nbrs) {
            if (on_path[w]) continue;
            on_path[w] = 1;
            path.push_back(w);
            walk(w);
            path.pop_back();
            on_path[w] = 0;
        }
    };

    for (const auto& s : x) {
        Vertex v = g.index(s);
        on_path[v] = 1;
        path = {v};
        walk(v);
        on_path[v] = 0;
        if (connected) return false;
    }
    return true;
}

Dag random_dag(std::size_t n, double p, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution coin(p);
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("V" + std::to_string(i));
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (coin(rng)) edges.emplace_back(names[i], names[j]);
        }
    }
    return Dag(names, edges);
}

}  // namespace causal::test
