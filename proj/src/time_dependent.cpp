#include "causal/time_dependent.hpp"

#include <algorithm>

namespace causal {

VertexSet TimeDepSet::cumulative(std::size_t k) const {
    VertexSet out;
    for (std::size_t j = 0; j <= k && j < blocks.size(); ++j) {
        out.insert(blocks[j].begin(), blocks[j].end());
    }
    return out;
}

VertexSet TimeDepSet::all() const {
    return blocks.empty() ? VertexSet{} : cumulative(blocks.size() - 1);
}

std::string format_blocks(const TimeDepSet& z) {
    std::string out = "(";
    for (std::size_t k = 0; k < z.blocks.size(); ++k) {
        if (k) out += ", ";
        out += format_set(z.blocks[k]);
    }
    return out + ")";
}

const char* to_string(Falsification f) {
    switch (f) {
        case Falsification::NotRun: return "not_run";
        case Falsification::Falsified: return "falsified";
        case Falsification::NotFalsified: return "not_falsified";
    }
    return "unknown";
}

namespace {

// Treatments A_0 .. A_{k-1}; empty for k = 0.
VertexSet treatments_before(const Query& q, std::size_t k) {
    VertexSet out;
    for (std::size_t j = 0; j < k; ++j) out.insert(q.treatments[j]);
    return out;
}

}  // namespace

TimeDepSet canonical_time_dep_set(const Dag& g, const Query& q) {
    const VertexSet treat = q.treatment_set();
    TimeDepSet z;
    VertexSet seen;
    for (const auto& a : q.treatments) {
        VertexSet pa = parents(g, {a});
        z.blocks.push_back(set_difference(set_difference(pa, seen), treat));
        seen = set_union(seen, pa);
    }
    return z;
}

void check_blocks(const Dag& g, const Query& q, const TimeDepSet& z) {
    if (z.blocks.size() != q.treatments.size()) {
        throw CausalError(ErrorKind::InvalidSet,
                          "expected " + std::to_string(q.treatments.size()) + " blocks, got " +
                              std::to_string(z.blocks.size()));
    }
    const VertexSet reserved = with(q.treatment_set(), q.outcome);
    VertexSet seen;
    for (const auto& block : z.blocks) {
        for (const auto& v : block) {
            g.index(v);
            if (reserved.count(v)) {
                throw CausalError(ErrorKind::InvalidSet,
                                  "block member '" + v + "' is a treatment or the outcome", {v});
            }
            if (!seen.insert(v).second) {
                throw CausalError(ErrorKind::InvalidSet,
                                  "vertex '" + v + "' appears in more than one block", {v});
            }
        }
    }
}

Dag manipulated_graph(const Dag& g, const Query& q, std::size_t k) {
    Vertex ak = g.index(q.treatments[k]);
    std::vector<char> later(g.size(), 0);
    for (std::size_t j = k + 1; j < q.treatments.size(); ++j) later[g.index(q.treatments[j])] = 1;
    return g.filter_edges([&](Vertex t, Vertex h) { return t != ak && !later[h]; });
}

TimeDepReport is_valid_time_dep(const Dag& g, const Query& q, const TimeDepSet& z) {
    check_blocks(g, q, z);
    TimeDepReport report;
    for (std::size_t k = 0; k < q.treatments.size(); ++k) {
        const std::string& ak = q.treatments[k];
        auto outside = set_difference(z.blocks[k], non_descendants(g, {ak}));
        if (!outside.empty()) {
            report.failed_block = k;
            report.failure = "block " + std::to_string(k) + " contains descendants of " + ak + ": " +
                             format_set(outside);
            return report;
        }
        VertexSet given = set_union(treatments_before(q, k), z.cumulative(k));
        if (!d_separated(manipulated_graph(g, q, k), {q.outcome}, {ak}, given)) {
            report.failed_block = k;
            report.failure = q.outcome + " is not d-separated from " + ak + " given " +
                             format_set(given) + " in the manipulated graph";
            return report;
        }
    }
    report.sufficient_criterion = true;
    return report;
}

namespace {

bool blocks_order(const TimeDepSet& a, const TimeDepSet& b) {
    auto sa = a.all().size();
    auto sb = b.all().size();
    if (sa != sb) return sa < sb;
    for (std::size_t k = 0; k < a.blocks.size(); ++k) {
        if (a.blocks[k] != b.blocks[k]) return set_order(a.blocks[k], b.blocks[k]);
    }
    return false;
}

}  // namespace

std::vector<TimeDepSet> enumerate_time_dep(const Dag& g, const Query& q, std::size_t max_vertices,
                                           const VertexSet& candidates) {
    VertexSet pool_set = candidates.empty() ? all_vertices(g) : candidates;
    for (const auto& v : pool_set) g.index(v);
    pool_set = set_difference(pool_set, with(q.treatment_set(), q.outcome));
    if (pool_set.size() > max_vertices) {
        throw CausalError(ErrorKind::GuardExceeded,
                          "candidate pool has " + std::to_string(pool_set.size()) +
                              " vertices, more than the limit of " + std::to_string(max_vertices));
    }
    const auto pool = to_vector(pool_set);
    const std::size_t blocks = q.treatments.size();

    // Each vertex may only enter blocks whose treatment it does not descend
    // from; slot `blocks` means "not adjusted for".
    std::vector<std::vector<std::size_t>> options(pool.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t k = 0; k < blocks; ++k) {
            if (non_descendants(g, {q.treatments[k]}).count(pool[i])) options[i].push_back(k);
        }
        options[i].push_back(blocks);
    }

    std::vector<TimeDepSet> out;
    std::vector<std::size_t> choice(pool.size(), 0);
    while (true) {
        TimeDepSet z;
        z.blocks.assign(blocks, {});
        for (std::size_t i = 0; i < pool.size(); ++i) {
            std::size_t slot = options[i][choice[i]];
            if (slot < blocks) z.blocks[slot].insert(pool[i]);
        }
        if (is_valid_time_dep(g, q, z).sufficient_criterion) out.push_back(std::move(z));

        std::size_t i = 0;
        while (i < pool.size() && ++choice[i] == options[i].size()) choice[i++] = 0;
        if (i == pool.size()) break;
    }
    std::sort(out.begin(), out.end(), blocks_order);
    return out;
}

Verdict compare_theorem5(const Dag& g, const Query& q, const TimeDepSet& first,
                         const TimeDepSet& second) {
    for (const auto* z : {&first, &second}) {
        if (!is_valid_time_dep(g, q, *z).sufficient_criterion) {
            throw CausalError(ErrorKind::InvalidSet,
                              format_blocks(*z) +
                                  " does not pass the time dependent sufficient criterion");
        }
    }
    const std::size_t p = q.treatments.size() - 1;

    // Conditions under which `good` dominates `bad`.
    auto conditions = [&](const TimeDepSet& good, const TimeDepSet& bad) {
        std::vector<Condition> out;
        auto add = [&](const VertexSet& x, const VertexSet& y, const VertexSet& z) {
            out.push_back({independence_statement(x, y, z), independent(g, x, y, z)});
        };
        for (std::size_t j = 0; j <= p; ++j) {
            add({q.treatments[j]}, set_difference(good.cumulative(j), bad.cumulative(j)),
                set_union(bad.cumulative(j), treatments_before(q, j)));
        }
        add({q.outcome}, set_difference(bad.all(), good.all()), set_union(good.all(), q.treatment_set()));
        for (std::size_t j = 1; j <= p; ++j) {
            add(good.blocks[j], set_difference(bad.cumulative(j - 1), good.cumulative(j - 1)),
                set_union(good.cumulative(j - 1), treatments_before(q, j)));
        }
        return out;
    };
    auto all_hold = [](const std::vector<Condition>& c) {
        return std::all_of(c.begin(), c.end(), [](const Condition& x) { return x.holds; });
    };

    auto forward = conditions(first, second);
    auto backward = conditions(second, first);
    Verdict v;
    bool first_wins = all_hold(forward);
    bool second_wins = all_hold(backward);
    v.conditions = forward;
    v.conditions.insert(v.conditions.end(), backward.begin(), backward.end());
    if (first_wins && second_wins) {
        v.kind = VerdictKind::Equivalent;
    } else if (first_wins) {
        v.kind = VerdictKind::FirstDominates;
    } else if (second_wins) {
        v.kind = VerdictKind::SecondDominates;
    }
    return v;
}

}  // namespace causal
