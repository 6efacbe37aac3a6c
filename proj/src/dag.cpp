#include "causal/dag.hpp"

#include <algorithm>
#include <queue>

namespace causal {

namespace {

// Returns the vertices of one directed cycle, or an empty vector.
std::vector<Vertex> find_cycle(const std::vector<std::vector<Vertex>>& children) {
    const std::size_t n = children.size();
    enum : char { White, Grey, Black };
    std::vector<char> colour(n, White);
    std::vector<Vertex> stack;
    std::vector<std::size_t> next(n, 0);

    for (Vertex root = 0; root < n; ++root) {
        if (colour[root] != White) continue;
        stack.push_back(root);
        colour[root] = Grey;
        while (!stack.empty()) {
            Vertex v = stack.back();
            if (next[v] < children[v].size()) {
                Vertex c = children[v][next[v]++];
                if (colour[c] == Grey) {
                    auto it = std::find(stack.begin(), stack.end(), c);
                    return std::vector<Vertex>(it, stack.end());
                }
                if (colour[c] == White) {
                    colour[c] = Grey;
                    stack.push_back(c);
                }
            } else {
                colour[v] = Black;
                stack.pop_back();
            }
        }
    }
    return {};
}

}  // namespace

Dag::Dag(std::vector<std::string> vertices, const std::vector<Edge>& edges)
    : names_(std::move(vertices)) {
    for (Vertex i = 0; i < names_.size(); ++i) {
        if (!index_.emplace(names_[i], i).second) {
            throw CausalError(ErrorKind::DuplicateVertex,
                              "duplicate vertex '" + names_[i] + "'", {names_[i]});
        }
    }
    parents_.assign(names_.size(), {});
    children_.assign(names_.size(), {});
    for (const auto& [tail, head] : edges) {
        for (const auto* end : {&tail, &head}) {
            if (!index_.count(*end)) {
                throw CausalError(ErrorKind::UnknownVertex,
                                  "edge endpoint '" + *end + "' is not a declared vertex", {*end});
            }
        }
        Vertex t = index_.at(tail);
        Vertex h = index_.at(head);
        if (std::find(children_[t].begin(), children_[t].end(), h) != children_[t].end()) continue;
        children_[t].push_back(h);
        parents_[h].push_back(t);
        ++edge_count_;
    }
    for (auto& list : parents_) std::sort(list.begin(), list.end());
    for (auto& list : children_) std::sort(list.begin(), list.end());

    auto cycle = find_cycle(children_);
    if (!cycle.empty()) {
        std::vector<std::string> named;
        std::string text;
        for (Vertex v : cycle) {
            named.push_back(names_[v]);
            text += names_[v] + " -> ";
        }
        text += names_[cycle.front()];
        throw CausalError(ErrorKind::Cycle, "graph contains a directed cycle: " + text, named);
    }
}

bool Dag::contains(std::string_view name) const {
    return index_.count(std::string(name)) > 0;
}

std::optional<Vertex> Dag::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vertex Dag::index(std::string_view name) const {
    auto v = find(name);
    if (!v) {
        throw CausalError(ErrorKind::UnknownVertex,
                          "unknown vertex '" + std::string(name) + "'", {std::string(name)});
    }
    return *v;
}

bool Dag::has_edge(std::string_view tail, std::string_view head) const {
    auto t = find(tail);
    auto h = find(head);
    if (!t || !h) return false;
    const auto& c = children_[*t];
    return std::binary_search(c.begin(), c.end(), *h);
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (Vertex t = 0; t < size(); ++t) {
        for (Vertex h : children_[t]) out.emplace_back(names_[t], names_[h]);
    }
    return out;
}

Dag Dag::filter_edges(const std::function<bool(Vertex, Vertex)>& keep) const {
    std::vector<Edge> kept;
    for (Vertex t = 0; t < size(); ++t) {
        for (Vertex h : children_[t]) {
            if (keep(t, h)) kept.emplace_back(names_[t], names_[h]);
        }
    }
    return Dag(names_, kept);
}

std::vector<char> Dag::mask(const VertexSet& s) const {
    std::vector<char> m(size(), 0);
    for (const auto& name : s) m[index(name)] = 1;
    return m;
}

VertexSet Dag::from_mask(const std::vector<char>& m) const {
    VertexSet out;
    for (Vertex v = 0; v < size(); ++v) {
        if (m[v]) out.insert(names_[v]);
    }
    return out;
}

bool Dag::operator==(const Dag& other) const {
    return names_ == other.names_ && edges() == other.edges();
}

Query make_query(const Dag& g, std::vector<std::string> treatments, std::string outcome) {
    if (treatments.empty()) {
        throw CausalError(ErrorKind::InvalidArgument, "at least one treatment is required");
    }
    g.index(outcome);
    VertexSet seen;
    for (const auto& a : treatments) {
        g.index(a);
        if (!seen.insert(a).second) {
            throw CausalError(ErrorKind::InvalidArgument, "treatment '" + a + "' listed twice", {a});
        }
        if (a == outcome) {
            throw CausalError(ErrorKind::InvalidArgument,
                              "outcome '" + a + "' cannot also be a treatment", {a});
        }
    }
    for (std::size_t i = 0; i < treatments.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (descendants(g, {treatments[i]}).count(treatments[j])) {
                throw CausalError(ErrorKind::InvalidArgument,
                                  "treatments are not in topological order: '" + treatments[j] +
                                      "' descends from '" + treatments[i] + "'",
                                  {treatments[j], treatments[i]});
            }
        }
    }
    return Query{std::move(treatments), std::move(outcome)};
}

VertexSet all_vertices(const Dag& g) {
    return to_set(g.vertices());
}

VertexSet parents(const Dag& g, const VertexSet& s) {
    VertexSet out;
    for (const auto& name : s) {
        for (Vertex p : g.parent_ids(g.index(name))) out.insert(g.name(p));
    }
    return out;
}

VertexSet children(const Dag& g, const VertexSet& s) {
    VertexSet out;
    for (const auto& name : s) {
        for (Vertex c : g.child_ids(g.index(name))) out.insert(g.name(c));
    }
    return out;
}

namespace {

VertexSet closure(const Dag& g, const VertexSet& s, bool upward) {
    std::vector<char> seen = g.mask(s);
    std::vector<Vertex> stack;
    for (const auto& name : s) stack.push_back(g.index(name));
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        const auto& next = upward ? g.parent_ids(v) : g.child_ids(v);
        for (Vertex w : next) {
            if (!seen[w]) {
                seen[w] = 1;
                stack.push_back(w);
            }
        }
    }
    return g.from_mask(seen);
}

}  // namespace

VertexSet ancestors(const Dag& g, const VertexSet& s) {
    return closure(g, s, true);
}

VertexSet descendants(const Dag& g, const VertexSet& s) {
    return closure(g, s, false);
}

VertexSet non_descendants(const Dag& g, const VertexSet& s) {
    return set_difference(all_vertices(g), descendants(g, s));
}

std::vector<std::string> topological_sort(const Dag& g) {
    std::vector<std::size_t> indegree(g.size());
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    for (Vertex v = 0; v < g.size(); ++v) {
        indegree[v] = g.parent_ids(v).size();
        if (indegree[v] == 0) ready.push(v);
    }
    std::vector<std::string> order;
    order.reserve(g.size());
    while (!ready.empty()) {
        Vertex v = ready.top();
        ready.pop();
        order.push_back(g.name(v));
        for (Vertex c : g.child_ids(v)) {
            if (--indegree[c] == 0) ready.push(c);
        }
    }
    return order;
}

std::vector<std::string> topological_sort(const Dag& g, const VertexSet& subset) {
    auto keep = g.mask(subset);
    std::vector<std::string> out;
    for (auto& name : topological_sort(g)) {
        if (keep[g.index(name)]) out.push_back(std::move(name));
    }
    return out;
}

Dag exogenize(const Dag& g, std::string_view u) {
    Vertex target = g.index(u);
    const auto& kids = g.child_ids(target);
    if (kids.size() != 1) {
        throw CausalError(ErrorKind::InvalidArgument,
                          "cannot exogenize '" + std::string(u) + "': it has " +
                              std::to_string(kids.size()) + " children, exactly one is required",
                          {std::string(u)});
    }
    const std::string& child = g.name(kids.front());
    std::vector<std::string> names;
    for (const auto& name : g.vertices()) {
        if (name != u) names.push_back(name);
    }
    std::vector<Edge> edges;
    for (auto& e : g.edges()) {
        if (e.first != u && e.second != u) edges.push_back(std::move(e));
    }
    for (Vertex p : g.parent_ids(target)) edges.emplace_back(g.name(p), child);
    return Dag(std::move(names), edges);
}

Dag induced_subgraph(const Dag& g, const VertexSet& keep) {
    auto m = g.mask(keep);
    std::vector<std::string> names;
    for (Vertex v = 0; v < g.size(); ++v) {
        if (m[v]) names.push_back(g.name(v));
    }
    std::vector<Edge> edges;
    for (auto& e : g.edges()) {
        if (keep.count(e.first) && keep.count(e.second)) edges.push_back(std::move(e));
    }
    return Dag(std::move(names), edges);
}

}  // namespace causal
