#include <algorithm>
#include <cmath>

#include "causal/oracle.hpp"

namespace causal {

Levels default_levels(const DiscreteLaw& law, const Query& q) {
    Levels out;
    for (const auto& a : q.treatments) out.push_back(law.support(a).back());
    return out;
}

namespace {

void check_levels(const DiscreteLaw& law, const Query& q, const Levels& a) {
    if (a.size() != q.treatments.size()) {
        throw CausalError(ErrorKind::InvalidArgument,
                          "expected " + std::to_string(q.treatments.size()) + " treatment levels, got " +
                              std::to_string(a.size()));
    }
    for (std::size_t k = 0; k < a.size(); ++k) law.level_index(law.graph().index(q.treatments[k]), a[k]);
}

}  // namespace

RandomVariable treatment_indicator(const DiscreteLaw& law, const Query& q, const Levels& a,
                                   std::size_t count) {
    RandomVariable out = law.constant(1.0);
    for (std::size_t k = 0; k < count; ++k) out = out * law.indicator(q.treatments[k], a[k]);
    return out;
}

double g_formula(const DiscreteLaw& law, const Query& q, const Levels& a, const RandomVariable& outcome) {
    check_levels(law, q, a);
    const Dag& g = law.graph();
    std::vector<std::size_t> treated(g.size(), SIZE_MAX);
    for (std::size_t k = 0; k < a.size(); ++k) {
        Vertex v = g.index(q.treatments[k]);
        treated[v] = law.level_index(v, a[k]);
    }
    double total = 0;
    for (std::size_t s = 0; s < law.state_count(); ++s) {
        double p = 1;
        for (Vertex v = 0; v < g.size() && p != 0; ++v) {
            std::size_t idx = law.value_index(s, v);
            if (treated[v] != SIZE_MAX) {
                if (idx != treated[v]) p = 0;
            } else {
                p *= law.cpt(v)[law.config_of(s, v)][idx];
            }
        }
        total += p * outcome[s];
    }
    return total;
}

double g_formula(const DiscreteLaw& law, const Query& q, const Levels& a) {
    return g_formula(law, q, a, law.variable(q.outcome));
}

double ipw_mean(const DiscreteLaw& law, const Query& q, const Levels& a, const RandomVariable& outcome) {
    check_levels(law, q, a);
    const Dag& g = law.graph();
    RandomVariable weight = law.constant(1.0);
    for (std::size_t k = 0; k < a.size(); ++k) {
        Vertex v = g.index(q.treatments[k]);
        std::size_t level = law.level_index(v, a[k]);
        for (std::size_t s = 0; s < law.state_count(); ++s) {
            if (law.value_index(s, v) != level) {
                weight[s] = 0;
            } else {
                weight[s] /= law.cpt(v)[law.config_of(s, v)][level];
            }
        }
    }
    return law.expectation(weight * outcome);
}

double ipw_mean(const DiscreteLaw& law, const Query& q, const Levels& a) {
    return ipw_mean(law, q, a, law.variable(q.outcome));
}

RandomVariable propensity(const DiscreteLaw& law, const std::string& treatment, double a,
                          const VertexSet& z) {
    return law.cond_expectation(law.indicator(treatment, a), z);
}

RandomVariable outcome_regression(const DiscreteLaw& law, const Query& q, double a, const VertexSet& z) {
    RandomVariable ind = law.indicator(q.treatment(), a);
    return safe_divide(law.cond_expectation(ind * law.variable(q.outcome), z), law.cond_expectation(ind, z));
}

RandomVariable psi_ti(const DiscreteLaw& law, const Query& q, double a, const VertexSet& z) {
    RandomVariable ind = law.indicator(q.treatment(), a);
    RandomVariable y = law.variable(q.outcome);
    RandomVariable pi = propensity(law, q.treatment(), a, z);
    RandomVariable b = outcome_regression(law, q, a, z);
    double chi = g_formula(law, q, {a});
    return safe_divide(ind, pi) * (y - b) + b - chi;
}

TimeDepNuisance time_dep_nuisance(const DiscreteLaw& law, const Query& q, const Levels& a,
                                  const TimeDepSet& z, const RandomVariable& outcome) {
    check_levels(law, q, a);
    const std::size_t blocks = q.treatments.size();
    if (z.blocks.size() != blocks) {
        throw CausalError(ErrorKind::InvalidSet, "expected " + std::to_string(blocks) + " blocks, got " +
                                                     std::to_string(z.blocks.size()));
    }
    TimeDepNuisance n;
    n.pi.resize(blocks);
    n.b.resize(blocks);
    for (std::size_t k = 0; k < blocks; ++k) {
        VertexSet zk = z.cumulative(k);
        n.pi[k] = safe_divide(law.cond_expectation(treatment_indicator(law, q, a, k + 1), zk),
                              law.cond_expectation(treatment_indicator(law, q, a, k), zk));
    }
    RandomVariable next = outcome;
    for (std::size_t k = blocks; k-- > 0;) {
        VertexSet zk = z.cumulative(k);
        RandomVariable ind = treatment_indicator(law, q, a, k + 1);
        n.b[k] = safe_divide(law.cond_expectation(ind * next, zk), law.cond_expectation(ind, zk));
        next = n.b[k];
    }
    n.chi = law.expectation(n.b[0]);
    return n;
}

double iterated_mean(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& z,
                     const RandomVariable& outcome) {
    return time_dep_nuisance(law, q, a, z, outcome).chi;
}

namespace {

// I_{abar_k} / lambda_k for k = -1..p, stored at index k + 1.
std::vector<RandomVariable> inverse_weights(const DiscreteLaw& law, const Query& q, const Levels& a,
                                            const TimeDepNuisance& n) {
    std::vector<RandomVariable> out{law.constant(1.0)};
    RandomVariable lambda = law.constant(1.0);
    for (std::size_t k = 0; k < n.pi.size(); ++k) {
        lambda = lambda * n.pi[k];
        out.push_back(safe_divide(treatment_indicator(law, q, a, k + 1), lambda));
    }
    return out;
}

}  // namespace

RandomVariable psi_td(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& z) {
    RandomVariable y = law.variable(q.outcome);
    TimeDepNuisance n = time_dep_nuisance(law, q, a, z, y);
    double chi = g_formula(law, q, a);
    auto w = inverse_weights(law, q, a, n);
    const std::size_t p = n.pi.size() - 1;
    RandomVariable out = w[p + 1] * (y - chi);
    for (std::size_t k = 0; k <= p; ++k) {
        RandomVariable ratio = safe_divide(law.indicator(q.treatments[k], a[k]), n.pi[k]) - 1.0;
        out = out - w[k] * ratio * (n.b[k] - chi);
    }
    return out;
}

RandomVariable psi_td_telescoping(const DiscreteLaw& law, const Query& q, const Levels& a,
                                  const TimeDepSet& z) {
    RandomVariable y = law.variable(q.outcome);
    TimeDepNuisance n = time_dep_nuisance(law, q, a, z, y);
    double chi = g_formula(law, q, a);
    auto w = inverse_weights(law, q, a, n);
    const std::size_t p = n.pi.size() - 1;
    RandomVariable out = n.b[0] - chi;
    for (std::size_t k = 0; k <= p; ++k) {
        const RandomVariable& next = k == p ? y : n.b[k + 1];
        out = out + w[k + 1] * (next - n.b[k]);
    }
    return out;
}

RandomVariable eval_eif(const DiscreteLaw& law, const Query& q, double a, const EifExpr& e) {
    RandomVariable ind = law.indicator(q.treatment(), a);
    RandomVariable y = law.variable(q.outcome);
    RandomVariable b = outcome_regression(law, q, a, e.O);
    RandomVariable weight = safe_divide(ind, propensity(law, q.treatment(), a, e.O_min));
    double chi = g_formula(law, q, {a});
    RandomVariable t = weight * y;

    RandomVariable out = law.constant(0.0);
    for (const auto& st : e.terms()) {
        RandomVariable term;
        switch (st.term.kind) {
            case TermKind::BAtom: term = b; break;
            case TermKind::Chi: term = law.constant(chi); break;
            case TermKind::BCond: term = law.cond_expectation(b, st.term.set); break;
            case TermKind::TCond: term = law.cond_expectation(t, st.term.set); break;
            case TermKind::IPWY: term = t; break;
            case TermKind::IPWB: term = weight * b; break;
            case TermKind::IPWResidual: term = weight * (y - b); break;
            case TermKind::Zero: term = law.constant(0.0); break;
        }
        out = out + static_cast<double>(st.coefficient) * term;
    }
    return out;
}

namespace {

RandomVariable projection_sum(const DiscreteLaw& law, const RandomVariable& f, const VertexSet& vertices) {
    const Dag& g = law.graph();
    RandomVariable out = law.constant(0.0);
    for (const auto& v : vertices) {
        VertexSet pa = parents(g, {v});
        out = out + law.cond_expectation(f, with(pa, v)) - law.cond_expectation(f, pa);
    }
    return out;
}

}  // namespace

RandomVariable eif_relevant_sum(const DiscreteLaw& law, const Query& q, double a) {
    const Dag& g = law.graph();
    const std::string& treatment = q.treatment();
    RandomVariable ind = law.indicator(treatment, a);
    RandomVariable j = safe_divide(ind * law.variable(q.outcome),
                                   propensity(law, treatment, a, parents(g, {treatment})));
    VertexSet relevant = set_difference(all_vertices(g), with(irrelevant_nodes(g, q), treatment));
    return projection_sum(law, j, relevant);
}

RandomVariable eif_full_projection(const DiscreteLaw& law, const Query& q, double a) {
    const Dag& g = law.graph();
    RandomVariable psi = psi_ti(law, q, a, parents(g, {q.treatment()}));
    return projection_sum(law, psi, all_vertices(g));
}

std::vector<DerivativeCheck> derivative_checks(const DiscreteLaw& law, const Query& q, double a,
                                               const RandomVariable& eif, double h) {
    const Dag& g = law.graph();
    std::vector<DerivativeCheck> out;
    for (Vertex v = 0; v < g.size(); ++v) {
        const auto& row = law.cpt(v)[0];
        if (row.size() < 2 || row[0] <= 0 || row[1] <= 0) continue;
        std::vector<double> direction(row.size(), 0.0);
        direction[0] = 1;
        direction[1] = -1;
        auto shifted = [&](double t) {
            std::vector<double> r = row;
            for (std::size_t i = 0; i < r.size(); ++i) r[i] += t * direction[i];
            return law.with_row(v, 0, r);
        };
        DerivativeCheck c;
        c.vertex = g.name(v);
        c.finite_difference =
            (g_formula(shifted(h), q, {a}) - g_formula(shifted(-h), q, {a})) / (2 * h);
        RandomVariable score(law.state_count(), 0.0);
        for (std::size_t s = 0; s < law.state_count(); ++s) {
            if (law.config_of(s, v) != 0) continue;
            std::size_t idx = law.value_index(s, v);
            score[s] = direction[idx] / row[idx];
        }
        c.analytic = law.expectation(eif * score);
        double scale = std::max(std::abs(c.analytic), std::abs(c.finite_difference));
        c.pass = std::abs(c.finite_difference - c.analytic) <=
                 kDerivativeRelTolerance * scale + kDerivativeAbsFloor;
        out.push_back(c);
    }
    return out;
}

}  // namespace causal
