#include <deque>

#include "causal/dag.hpp"

namespace causal {

namespace {

enum Direction : int { Up = 0, Down = 1 };

// Bayes-ball reachability: a state (v, Up) means the trail reached v from one
// of its children, (v, Down) from one of its parents.
std::vector<char> reachable(const Dag& g, const std::vector<char>& source,
                            const std::vector<char>& given) {
    const std::size_t n = g.size();
    std::vector<char> anc_given = given;
    {
        std::vector<Vertex> stack;
        for (Vertex v = 0; v < n; ++v) {
            if (given[v]) stack.push_back(v);
        }
        while (!stack.empty()) {
            Vertex v = stack.back();
            stack.pop_back();
            for (Vertex p : g.parent_ids(v)) {
                if (!anc_given[p]) {
                    anc_given[p] = 1;
                    stack.push_back(p);
                }
            }
        }
    }

    std::vector<char> visited(2 * n, 0);
    std::vector<char> reached(n, 0);
    std::deque<std::pair<Vertex, Direction>> queue;
    for (Vertex v = 0; v < n; ++v) {
        if (source[v]) queue.emplace_back(v, Up);
    }
    while (!queue.empty()) {
        auto [v, dir] = queue.front();
        queue.pop_front();
        if (visited[2 * v + dir]) continue;
        visited[2 * v + dir] = 1;
        if (!given[v]) reached[v] = 1;

        if (dir == Up && !given[v]) {
            for (Vertex p : g.parent_ids(v)) queue.emplace_back(p, Up);
            for (Vertex c : g.child_ids(v)) queue.emplace_back(c, Down);
        } else if (dir == Down) {
            if (!given[v]) {
                for (Vertex c : g.child_ids(v)) queue.emplace_back(c, Down);
            }
            if (anc_given[v]) {
                for (Vertex p : g.parent_ids(v)) queue.emplace_back(p, Up);
            }
        }
    }
    return reached;
}

}  // namespace

VertexSet d_connected(const Dag& g, const VertexSet& x, const VertexSet& z) {
    return g.from_mask(reachable(g, g.mask(x), g.mask(z)));
}

bool d_separated(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z) {
    for (const auto* s : {&x, &y, &z}) {
        for (const auto& name : *s) g.index(name);
    }
    if (!disjoint(x, y) || !disjoint(x, z) || !disjoint(y, z)) {
        throw CausalError(ErrorKind::InvalidArgument,
                          "d-separation arguments must be pairwise disjoint");
    }
    if (x.empty() || y.empty()) return true;
    auto reached = reachable(g, g.mask(x), g.mask(z));
    for (const auto& name : y) {
        if (reached[g.index(name)]) return false;
    }
    return true;
}

bool independent(const Dag& g, const VertexSet& x, const VertexSet& y, const VertexSet& z) {
    VertexSet xs = set_difference(x, z);
    VertexSet ys = set_difference(y, z);
    if (!disjoint(xs, ys)) return false;
    return d_separated(g, xs, ys, z);
}

std::optional<std::vector<std::string>> open_path(const Dag& g, const VertexSet& x,
                                                  const VertexSet& y, const VertexSet& z) {
    const std::size_t n = g.size();
    auto given = g.mask(z);
    auto target = g.mask(y);
    auto anc_given = g.mask(ancestors(g, z));

    // Depth-first search over simple paths, pruning as soon as an interior
    // vertex blocks. `arrived_into` records whether the edge used to reach a
    // vertex points into it.
    struct Frame {
        Vertex v;
        bool arrived_into;
        std::size_t next;
    };
    for (const auto& start_name : x) {
        Vertex start = g.index(start_name);
        std::vector<char> on_path(n, 0);
        std::vector<Vertex> path{start};
        std::vector<Frame> stack{{start, false, 0}};
        on_path[start] = 1;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& pa = g.parent_ids(f.v);
            const auto& ch = g.child_ids(f.v);
            if (f.next >= pa.size() + ch.size()) {
                on_path[f.v] = 0;
                path.pop_back();
                stack.pop_back();
                continue;
            }
            std::size_t k = f.next++;
            bool to_parent = k < pa.size();
            Vertex w = to_parent ? pa[k] : ch[k - pa.size()];
            if (on_path[w]) continue;
            if (stack.size() > 1) {
                bool collider = f.arrived_into && to_parent;
                if (collider ? !anc_given[f.v] : static_cast<bool>(given[f.v])) continue;
            }
            path.push_back(w);
            if (target[w]) {
                std::vector<std::string> out;
                for (Vertex v : path) out.push_back(g.name(v));
                return out;
            }
            on_path[w] = 1;
            stack.push_back({w, !to_parent, 0});
        }
    }
    return std::nullopt;
}

}  // namespace causal
