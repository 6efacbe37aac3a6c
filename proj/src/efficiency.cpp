#include <algorithm>

#include "causal/adjustment.hpp"
#include "causal/efficiency.hpp"

namespace causal {

VertexSet indirect_nodes(const Dag& g, const Query& q) {
    if (!q.point()) {
        throw CausalError(ErrorKind::Unsupported, "indirect nodes need a single treatment");
    }
    const std::string& a = q.treatment();
    // Vertices with a directed path to Y that avoids A.
    Dag without_a = induced_subgraph(g, without(all_vertices(g), a));
    VertexSet reach_y = ancestors(without_a, {q.outcome});
    return set_difference(without(ancestors(g, {a}), a), reach_y);
}

VertexSet irrelevant_nodes(const Dag& g, const Query& q) {
    return set_union(indirect_nodes(g, q),
                     set_difference(all_vertices(g), ancestors(g, {q.outcome})));
}

Dag prune(const Dag& g, const Query& q) {
    auto indir = indirect_nodes(g, q);
    Dag out = induced_subgraph(g, ancestors(g, {q.outcome}));
    auto order = topological_sort(g, indir);
    for (auto it = order.rbegin(); it != order.rend(); ++it) out = exogenize(out, *it);
    return out;
}

namespace {

VertexSet pa(const Dag& g, const std::string& v) {
    return parents(g, {v});
}

VertexSet family(const Dag& g, const std::string& v) {
    return with(parents(g, {v}), v);
}

Term bcond(VertexSet s) {
    return {TermKind::BCond, std::move(s)};
}

Term tcond(VertexSet s) {
    return {TermKind::TCond, std::move(s)};
}

}  // namespace

std::set<int> offenders_nondesc(const Dag& g, const std::vector<std::string>& W,
                                const VertexSet& O, int init) {
    std::set<int> out;
    for (int i = init; i >= 1; --i) {
        const auto& wi = W[i - 1];
        const auto& wnext = W[i];
        VertexSet fam = family(g, wi);
        VertexSet pa_next = pa(g, wnext);
        VertexSet inter = set_intersection(fam, pa_next);
        if (!independent(g, set_difference(O, inter), set_symmetric_difference(fam, pa_next), inter)) {
            out.insert(i);
        }
    }
    return out;
}

std::set<int> offenders_desc(const Dag& g, const std::string& treatment,
                             const std::string& outcome, const std::vector<std::string>& M,
                             const VertexSet& O_min, int init) {
    // M_{K+1} = Y, 1-based.
    auto m = [&](int k) -> const std::string& {
        return k == static_cast<int>(M.size()) + 1 ? outcome : M[k - 1];
    };
    std::set<int> out;
    for (int i = init; i >= 2; --i) {
        VertexSet pa_i = pa(g, m(i));
        VertexSet fam_prev = family(g, m(i - 1));
        // E[T | pa(M_i)] factors as IPW * E[Y | pa(M_i)] only when A and
        // O_min are parents of M_i itself.
        bool covers = is_subset(with(O_min, treatment), pa_i);
        bool inclusion = is_subset(pa_i, fam_prev);
        bool separated = independent(g, {outcome}, set_difference(fam_prev, pa_i), pa_i);
        if (!covers || !inclusion || !separated) out.insert(i);
    }
    return out;
}

EfficiencyReport check_efficient(const Dag& g, const Query& q) {
    if (!q.point()) {
        throw CausalError(ErrorKind::Unsupported, "the efficiency check needs a single treatment");
    }
    const std::string& a = q.treatment();
    const std::string& y = q.outcome;
    if (!ancestors(g, {y}).count(a)) {
        throw CausalError(ErrorKind::InvalidArgument,
                          "treatment '" + a + "' is not an ancestor of the outcome '" + y + "'",
                          {a, y});
    }

    EfficiencyReport r;
    r.pruned_graph = prune(g, q);
    const Dag& pg = r.pruned_graph;

    r.partition.A = a;
    r.partition.Y = y;
    r.partition.W = topological_sort(pg, non_descendants(pg, {a}));
    VertexSet mediators = set_difference(descendants(pg, {a}), {a, y});
    r.partition.M = topological_sort(pg, mediators);
    const auto& W = r.partition.W;
    const auto& M = r.partition.M;
    const int J = static_cast<int>(W.size());
    const int K = static_cast<int>(M.size());

    r.O = optimal_set(pg, q);
    r.O_min = optimal_minimal_set(pg, q);
    const auto O_sorted = topological_sort(pg, r.O);

    auto w = [&](int j) -> const std::string& { return W[j - 1]; };
    auto m = [&](int k) -> const std::string& { return k == K + 1 ? y : M[k - 1]; };

    // Non-descendant part.
    std::vector<SignedTerm> nondesc;
    auto add_w_differences = [&](const std::set<int>& offenders) {
        for (int h : offenders) {
            nondesc.push_back({1, bcond(family(pg, w(h)))});
            nondesc.push_back({-1, bcond(pa(pg, w(h + 1)))});
        }
    };
    const bool parents_of_last =
        !O_sorted.empty() && is_subset(without(r.O, O_sorted.back()), pa(pg, O_sorted.back()));
    if (parents_of_last && J > 1) {
        int j = J - 1;
        while (is_subset(without(pa(pg, w(j + 1)), w(j)), pa(pg, w(j))) && j >= 2) --j;
        nondesc.push_back({1, {TermKind::BAtom, {}}});
        nondesc.push_back({-1, {TermKind::Chi, {}}});
        if (j >= 2) {
            r.offenders_nondesc = offenders_nondesc(pg, W, r.O, j - 1);
            r.offenders_nondesc.insert(j);
            add_w_differences(r.offenders_nondesc);
        } else {
            r.efficient_nondesc = true;
        }
    } else if (J > 1) {
        r.offenders_nondesc = offenders_nondesc(pg, W, r.O, J - 1);
        nondesc.push_back({1, bcond(family(pg, w(J)))});
        nondesc.push_back({-1, {TermKind::Chi, {}}});
        add_w_differences(r.offenders_nondesc);
    } else if (J == 1) {
        nondesc.push_back({1, {TermKind::BAtom, {}}});
        nondesc.push_back({-1, {TermKind::Chi, {}}});
        r.efficient_nondesc = true;
    } else {
        r.efficient_nondesc = true;
    }

    // Descendant part.
    std::vector<SignedTerm> desc;
    auto add_m_differences = [&](const std::set<int>& offenders) {
        for (int h : offenders) {
            desc.push_back({1, tcond(family(pg, m(h - 1)))});
            desc.push_back({-1, tcond(pa(pg, m(h)))});
        }
    };
    auto subtract_m1_term = [&]() {
        if (pa(pg, m(1)) == with(r.O, a)) {
            desc.push_back({-1, {TermKind::IPWB, {}}});
        } else {
            desc.push_back({-1, tcond(pa(pg, m(1)))});
        }
    };
    const VertexSet a_and_omin = with(r.O_min, a);
    if (K >= 1 && is_subset(a_and_omin, pa(pg, y))) {
        int k = K + 1;
        while (k >= 2 && is_subset(pa(pg, m(k)), family(pg, m(k - 1)))) --k;
        if (k >= 2) {
            desc.push_back({1, {TermKind::IPWY, {}}});
            r.offenders_desc = offenders_desc(pg, a, y, M, r.O_min, k - 1);
            r.offenders_desc.insert(k);
            add_m_differences(r.offenders_desc);
            subtract_m1_term();
        } else {
            desc.push_back({1, {TermKind::IPWResidual, {}}});
            r.efficient_desc = true;
        }
    } else if (K >= 1) {
        r.offenders_desc = offenders_desc(pg, a, y, M, r.O_min, K);
        r.offenders_desc.insert(K + 1);
        desc.push_back({1, tcond(family(pg, y))});
        add_m_differences(r.offenders_desc);
        subtract_m1_term();
    } else {
        desc.push_back({1, {TermKind::IPWResidual, {}}});
        r.efficient_desc = true;
    }

    std::vector<SignedTerm> all = nondesc;
    all.insert(all.end(), desc.begin(), desc.end());
    r.eif = EifExpr::canonical(a, y, r.O, r.O_min, all);
    r.efficient = r.efficient_nondesc && r.efficient_desc;
    r.uninformative = set_difference(all_vertices(g), r.eif.mentioned());
    return r;
}

}  // namespace causal
