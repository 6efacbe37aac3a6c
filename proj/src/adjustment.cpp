#include "causal/adjustment.hpp"

#include <algorithm>

namespace causal {

const char* to_string(AdjustmentReason::Kind kind) {
    switch (kind) {
        case AdjustmentReason::Kind::Ok: return "ok";
        case AdjustmentReason::Kind::ForbiddenHit: return "forbidden";
        case AdjustmentReason::Kind::OpenPath: return "open_path";
        case AdjustmentReason::Kind::Removable: return "removable";
    }
    return "unknown";
}

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::FirstDominates: return "FirstDominates";
        case VerdictKind::SecondDominates: return "SecondDominates";
        case VerdictKind::Equivalent: return "Equivalent";
        case VerdictKind::Inconclusive: return "Inconclusive";
    }
    return "unknown";
}

std::string independence_statement(const VertexSet& x, const VertexSet& y, const VertexSet& z) {
    return format_set(x) + " _||_ " + format_set(y) + " | " + format_set(z);
}

bool set_order(const VertexSet& a, const VertexSet& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
}

namespace {

// Vertices reachable from `from` by directed paths that do not pass through
// any vertex in `blocked` (the start vertices themselves excepted).
std::vector<char> reach_avoiding(const Dag& g, const std::vector<Vertex>& from,
                                 const std::vector<char>& blocked, bool upward) {
    std::vector<char> seen(g.size(), 0);
    std::vector<Vertex> stack;
    for (Vertex v : from) {
        const auto& next = upward ? g.parent_ids(v) : g.child_ids(v);
        for (Vertex w : next) stack.push_back(w);
    }
    while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        if (seen[v] || blocked[v]) continue;
        seen[v] = 1;
        const auto& next = upward ? g.parent_ids(v) : g.child_ids(v);
        for (Vertex w : next) stack.push_back(w);
    }
    return seen;
}

// Graph with the first edge of every proper causal path removed.
Dag proper_backdoor_graph(const Dag& g, const Query& q) {
    auto treat = g.mask(q.treatment_set());
    auto cn = g.mask(causal_nodes(g, q));
    return g.filter_edges([&](Vertex t, Vertex h) { return !(treat[t] && cn[h]); });
}

void check_disjoint_from_query(const Query& q, const VertexSet& z) {
    for (const auto& v : z) {
        if (v == q.outcome || q.treatment_set().count(v)) {
            throw CausalError(ErrorKind::InvalidSet,
                              "adjustment set " + format_set(z) +
                                  " must not contain treatments or the outcome",
                              {v});
        }
    }
}

void require_valid(const Dag& g, const Query& q, const VertexSet& z) {
    auto report = is_valid_adjustment(g, q, z);
    if (!report.valid) {
        throw CausalError(ErrorKind::InvalidSet,
                          format_set(z) + " is not a valid adjustment set",
                          report.reason.witness);
    }
}

}  // namespace

VertexSet causal_nodes(const Dag& g, const Query& q) {
    auto treat = g.mask(q.treatment_set());
    std::vector<Vertex> sources;
    for (const auto& a : q.treatments) sources.push_back(g.index(a));
    auto from_treatments = reach_avoiding(g, sources, treat, false);

    Vertex y = g.index(q.outcome);
    auto to_outcome = reach_avoiding(g, {y}, treat, true);
    to_outcome[y] = 1;

    std::vector<char> cn(g.size(), 0);
    for (Vertex v = 0; v < g.size(); ++v) cn[v] = from_treatments[v] && to_outcome[v] && !treat[v];
    return g.from_mask(cn);
}

VertexSet forbidden(const Dag& g, const Query& q) {
    return set_union(descendants(g, causal_nodes(g, q)), q.treatment_set());
}

AdjustmentReport is_valid_adjustment(const Dag& g, const Query& q, const VertexSet& z) {
    for (const auto& v : z) g.index(v);
    check_disjoint_from_query(q, z);

    AdjustmentReport report;
    report.set = z;
    auto hit = set_intersection(z, forbidden(g, q));
    if (!hit.empty()) {
        report.reason = {AdjustmentReason::Kind::ForbiddenHit, to_vector(hit)};
        return report;
    }
    Dag pbd = proper_backdoor_graph(g, q);
    if (!d_separated(pbd, q.treatment_set(), {q.outcome}, z)) {
        auto path = open_path(pbd, q.treatment_set(), {q.outcome}, z);
        report.reason = {AdjustmentReason::Kind::OpenPath, path.value_or(std::vector<std::string>{})};
        return report;
    }
    report.valid = true;
    return report;
}

AdjustmentReport is_minimal_adjustment(const Dag& g, const Query& q, const VertexSet& z) {
    auto report = is_valid_adjustment(g, q, z);
    if (!report.valid) return report;
    std::vector<std::string> removable;
    for (const auto& v : z) {
        if (is_valid_adjustment(g, q, without(z, v)).valid) removable.push_back(v);
    }
    if (!removable.empty()) {
        report.reason = {AdjustmentReason::Kind::Removable, removable};
        return report;
    }
    report.minimal = true;
    return report;
}

VertexSet optimal_set(const Dag& g, const Query& q) {
    auto cn = causal_nodes(g, q);
    auto o = set_difference(parents(g, cn), forbidden(g, q));
    if (!is_valid_adjustment(g, q, o).valid) {
        throw CausalError(ErrorKind::NoAdjustmentSet,
                          "no time independent adjustment set exists for this query");
    }
    return o;
}

VertexSet optimal_minimal_set(const Dag& g, const Query& q, const std::vector<std::string>& order) {
    if (!q.point()) {
        throw CausalError(ErrorKind::Unsupported,
                          "the optimal minimal set is only defined for a single treatment");
    }
    const VertexSet o = optimal_set(g, q);
    const VertexSet a{q.treatment()};
    VertexSet s = o;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& v : order) {
            if (!s.count(v)) continue;
            VertexSet smaller = without(s, v);
            if (independent(g, a, set_difference(o, smaller), smaller)) {
                s = std::move(smaller);
                changed = true;
            }
        }
    }
    return s;
}

VertexSet optimal_minimal_set(const Dag& g, const Query& q) {
    auto order = topological_sort(g);
    std::reverse(order.begin(), order.end());
    return optimal_minimal_set(g, q, order);
}

Verdict compare_theorem1(const Dag& g, const Query& q, const VertexSet& first,
                         const VertexSet& second) {
    require_valid(g, q, first);
    require_valid(g, q, second);
    const VertexSet a = q.treatment_set();
    const VertexSet y{q.outcome};

    auto check = [&](const VertexSet& x, const VertexSet& w, const VertexSet& z) {
        return Condition{independence_statement(x, w, z), independent(g, x, w, z)};
    };
    Verdict v;
    v.conditions = {
        check(a, set_difference(first, second), second),
        check(y, set_difference(second, first), set_union(first, a)),
        check(a, set_difference(second, first), first),
        check(y, set_difference(first, second), set_union(second, a)),
    };
    bool first_wins = v.conditions[0].holds && v.conditions[1].holds;
    bool second_wins = v.conditions[2].holds && v.conditions[3].holds;
    if (first_wins && second_wins) {
        v.kind = VerdictKind::Equivalent;
    } else if (first_wins) {
        v.kind = VerdictKind::FirstDominates;
    } else if (second_wins) {
        v.kind = VerdictKind::SecondDominates;
    }
    return v;
}

VertexSet prune_adjustment(const Dag& g, const Query& q, const VertexSet& z) {
    require_valid(g, q, z);
    const VertexSet a = q.treatment_set();
    const VertexSet y{q.outcome};
    auto order = topological_sort(g, z);
    std::reverse(order.begin(), order.end());

    VertexSet current = z;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& v : order) {
            if (!current.count(v)) continue;
            VertexSet rest = without(current, v);
            if (independent(g, y, {v}, set_union(rest, a))) {
                current = std::move(rest);
                changed = true;
            }
        }
    }
    return current;
}

namespace {

std::vector<std::string> candidate_pool(const Dag& g, const Query& q, std::size_t max_vertices,
                                        const VertexSet& candidates) {
    VertexSet pool = candidates.empty() ? all_vertices(g) : candidates;
    for (const auto& v : pool) g.index(v);
    pool = set_difference(pool, with(q.treatment_set(), q.outcome));
    if (pool.size() > max_vertices) {
        throw CausalError(ErrorKind::GuardExceeded,
                          "candidate pool has " + std::to_string(pool.size()) +
                              " vertices, more than the limit of " + std::to_string(max_vertices));
    }
    return to_vector(pool);
}

template <typename Visit>
void for_each_subset(const std::vector<std::string>& pool, Visit visit) {
    const std::size_t count = std::size_t{1} << pool.size();
    for (std::size_t bits = 0; bits < count; ++bits) {
        VertexSet s;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (bits >> i & 1) s.insert(pool[i]);
        }
        visit(s);
    }
}

}  // namespace

std::vector<VertexSet> enumerate_adjustment_sets(const Dag& g, const Query& q,
                                                 std::size_t max_vertices,
                                                 const VertexSet& candidates) {
    auto pool = candidate_pool(g, q, max_vertices, candidates);
    const VertexSet forb = forbidden(g, q);
    std::vector<VertexSet> out;
    for_each_subset(pool, [&](const VertexSet& s) {
        if (!disjoint(s, forb)) return;
        if (is_valid_adjustment(g, q, s).valid) out.push_back(s);
    });
    std::sort(out.begin(), out.end(), set_order);
    return out;
}

std::vector<VertexSet> minimal_sets_brute_force(const Dag& g, const Query& q,
                                                std::size_t max_vertices,
                                                const VertexSet& candidates) {
    auto valid = enumerate_adjustment_sets(g, q, max_vertices, candidates);
    std::vector<VertexSet> out;
    for (const auto& s : valid) {
        bool has_valid_subset = std::any_of(valid.begin(), valid.end(), [&](const VertexSet& t) {
            return t.size() < s.size() && is_subset(t, s);
        });
        if (!has_valid_subset) out.push_back(s);
    }
    return out;
}

}  // namespace causal
