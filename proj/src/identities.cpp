#include <algorithm>
#include <cmath>

#include "causal/oracle.hpp"

namespace causal {

namespace {

struct IdentityName {
    Identity id;
    const char* name;
};

constexpr IdentityName kNames[] = {
    {Identity::Lemma1, "lemma1"},
    {Identity::Lemma2, "lemma2"},
    {Identity::Theorem1, "theorem1"},
    {Identity::Lemma1Ate, "lemma1_ate"},
    {Identity::Lemma2Ate, "lemma2_ate"},
    {Identity::Theorem1Ate, "theorem1_ate"},
    {Identity::Lemma3, "lemma3"},
    {Identity::Lemma4, "lemma4"},
    {Identity::Theorem5, "theorem5"},
    {Identity::InvPi, "inv_pi"},
    {Identity::Definition1, "definition1"},
};

}  // namespace

const char* to_string(Identity id) {
    for (const auto& n : kNames) {
        if (n.id == id) return n.name;
    }
    return "unknown";
}

Identity parse_identity(const std::string& name) {
    for (const auto& n : kNames) {
        if (name == n.name) return n.id;
    }
    std::string known;
    for (const auto& n : kNames) known += std::string(known.empty() ? "" : ", ") + n.name;
    throw CausalError(ErrorKind::InvalidArgument, "unknown identity '" + name + "' (known: " + known + ")");
}

std::vector<Identity> all_identities() {
    std::vector<Identity> out;
    for (const auto& n : kNames) out.push_back(n.id);
    return out;
}

bool is_time_dependent(Identity id) {
    return id == Identity::Lemma3 || id == Identity::Lemma4 || id == Identity::Theorem5 ||
           id == Identity::Definition1;
}

namespace {

TimeDepSet blockwise_union(const TimeDepSet& g, const TimeDepSet& b) {
    TimeDepSet out;
    for (std::size_t k = 0; k < std::max(g.blocks.size(), b.blocks.size()); ++k) {
        VertexSet block;
        if (k < g.blocks.size()) block = set_union(block, g.blocks[k]);
        if (k < b.blocks.size()) block = set_union(block, b.blocks[k]);
        out.blocks.push_back(block);
    }
    return out;
}

VertexSet treatments_before(const Query& q, std::size_t k) {
    return to_set(std::vector<std::string>(q.treatments.begin(), q.treatments.begin() + k));
}

class Hypotheses {
public:
    Hypotheses(const Dag& g, const Query& q) : g_(g), q_(q) {}

    void independent_of(const VertexSet& x, const VertexSet& y, const VertexSet& z) {
        out.push_back({independence_statement(x, y, z), independent(g_, x, y, z)});
    }
    void adjustment(const VertexSet& z) {
        bool valid = disjoint(z, with(q_.treatment_set(), q_.outcome)) && is_valid_adjustment(g_, q_, z).valid;
        out.push_back({format_set(z) + " is an adjustment set", valid});
    }
    void time_dep(const TimeDepSet& z) {
        bool valid = false;
        try {
            valid = is_valid_time_dep(g_, q_, z).sufficient_criterion;
        } catch (const CausalError&) {
        }
        out.push_back({format_blocks(z) + " passes the time dependent criterion", valid});
    }
    void disjoint_sets(const VertexSet& a, const VertexSet& b) {
        out.push_back({format_set(a) + " and " + format_set(b) + " are disjoint", disjoint(a, b)});
    }

    std::vector<Condition> out;

private:
    const Dag& g_;
    const Query& q_;
};

void require_point(const Query& q, Identity id) {
    if (!q.point()) {
        throw CausalError(ErrorKind::Unsupported,
                          std::string(to_string(id)) + " is stated for a single treatment");
    }
}

}  // namespace

std::vector<Condition> identity_hypotheses(const Dag& graph, const Query& q, Identity id,
                                           const IdentityArgs& args) {
    Hypotheses h(graph, q);
    const VertexSet& G = args.g;
    const VertexSet& B = args.b;
    const VertexSet A = q.treatment_set();
    const VertexSet Y = {q.outcome};
    switch (id) {
        case Identity::Lemma1:
        case Identity::Lemma1Ate:
            require_point(q, id);
            h.adjustment(B);
            h.disjoint_sets(G, B);
            h.independent_of(A, G, B);
            break;
        case Identity::Lemma2:
        case Identity::Lemma2Ate:
            require_point(q, id);
            h.adjustment(set_union(G, B));
            h.disjoint_sets(G, B);
            h.independent_of(Y, B, set_union(G, A));
            break;
        case Identity::Theorem1:
        case Identity::Theorem1Ate:
            require_point(q, id);
            h.adjustment(G);
            h.adjustment(B);
            h.independent_of(A, set_difference(G, B), B);
            h.independent_of(Y, set_difference(B, G), set_union(G, A));
            break;
        case Identity::InvPi:
            require_point(q, id);
            h.independent_of(A, set_difference(G, B), B);
            break;
        case Identity::Lemma3: {
            const auto& gb = args.g_blocks;
            const auto& bb = args.b_blocks;
            h.time_dep(bb);
            h.disjoint_sets(gb.all(), bb.all());
            for (std::size_t j = 0; j < q.treatments.size(); ++j) {
                h.independent_of({q.treatments[j]}, gb.cumulative(j),
                                 set_union(bb.cumulative(j), treatments_before(q, j)));
            }
            break;
        }
        case Identity::Lemma4: {
            const auto& gb = args.g_blocks;
            const auto& bb = args.b_blocks;
            h.time_dep(blockwise_union(gb, bb));
            h.disjoint_sets(gb.all(), bb.all());
            h.independent_of(Y, bb.all(), set_union(gb.all(), A));
            for (std::size_t j = 1; j < q.treatments.size(); ++j) {
                h.independent_of(gb.blocks[j], bb.cumulative(j - 1),
                                 set_union(gb.cumulative(j - 1), treatments_before(q, j)));
            }
            break;
        }
        case Identity::Theorem5: {
            const auto& gb = args.g_blocks;
            const auto& bb = args.b_blocks;
            h.time_dep(gb);
            h.time_dep(bb);
            for (std::size_t j = 0; j < q.treatments.size(); ++j) {
                h.independent_of({q.treatments[j]}, set_difference(gb.cumulative(j), bb.cumulative(j)),
                                 set_union(bb.cumulative(j), treatments_before(q, j)));
            }
            h.independent_of(Y, set_difference(bb.all(), gb.all()), set_union(gb.all(), A));
            for (std::size_t j = 1; j < q.treatments.size(); ++j) {
                h.independent_of(gb.blocks[j], set_difference(bb.cumulative(j - 1), gb.cumulative(j - 1)),
                                 set_union(gb.cumulative(j - 1), treatments_before(q, j)));
            }
            break;
        }
        case Identity::Definition1:
            check_blocks(graph, q, args.g_blocks);
            break;
    }
    return h.out;
}

namespace {

// Functions of the state evaluated on the stratum {A = a}.
class PointPieces {
public:
    PointPieces(const DiscreteLaw& law, const Query& q, double a)
        : law_(law), q_(q), a_(a), ind_(law.indicator(q.treatment(), a)), y_(law.variable(q.outcome)) {}

    RandomVariable pi(const VertexSet& z) const { return propensity(law_, q_.treatment(), a_, z); }
    RandomVariable b(const VertexSet& z) const { return outcome_regression(law_, q_, a_, z); }
    RandomVariable inv_pi(const VertexSet& z) const { return safe_divide(law_.constant(1.0), pi(z)); }
    const RandomVariable& y() const { return y_; }

    // var(f | A = a, S) as a function of S.
    RandomVariable var_given_treated(const RandomVariable& f, const VertexSet& s) const {
        RandomVariable den = law_.cond_expectation(ind_, s);
        RandomVariable mean = safe_divide(law_.cond_expectation(ind_ * f, s), den);
        RandomVariable dev = f - mean;
        return safe_divide(law_.cond_expectation(ind_ * dev * dev, s), den);
    }

    // E[(1/pi(B) - 1) var(b(G, B) | B)].
    double supplementation(const VertexSet& g, const VertexSet& b) const {
        RandomVariable v = law_.cond_variance(this->b(set_union(g, b)), b);
        return law_.expectation((inv_pi(b) - 1.0) * v);
    }

    // E[pi(G) var(Y | A = a, G) var(1/pi(G, B) | A = a, G)].
    double deletion(const VertexSet& g, const VertexSet& b) const {
        RandomVariable vy = var_given_treated(y_, g);
        RandomVariable vw = var_given_treated(inv_pi(set_union(g, b)), g);
        return law_.expectation(pi(g) * vy * vw);
    }

private:
    const DiscreteLaw& law_;
    const Query& q_;
    double a_;
    RandomVariable ind_;
    RandomVariable y_;
};

struct Sides {
    double lhs = 0;
    double rhs = 0;
};

void accumulate(IdentityReport& r, const Sides& s) {
    double d = std::abs(s.lhs - s.rhs);
    if (d >= r.discrepancy) {
        r.discrepancy = d;
        r.lhs = s.lhs;
        r.rhs = s.rhs;
    }
}

double var_psi(const DiscreteLaw& law, const Query& q, double a, const VertexSet& z) {
    return law.variance(psi_ti(law, q, a, z));
}

double var_psi_ate(const DiscreteLaw& law, const Query& q, double a1, double a0, const VertexSet& z) {
    return law.variance(psi_ti(law, q, a1, z) - psi_ti(law, q, a0, z));
}

// Every combination of treatment levels.
std::vector<Levels> all_levels(const DiscreteLaw& law, const Query& q) {
    std::vector<Levels> out{{}};
    for (const auto& t : q.treatments) {
        std::vector<Levels> next;
        for (const auto& prefix : out) {
            for (double v : law.support(t)) {
                Levels l = prefix;
                l.push_back(v);
                next.push_back(std::move(l));
            }
        }
        out = std::move(next);
    }
    return out;
}

// Right-hand side of the supplementation identity, B grown to GB.
double td_supplementation(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& b,
                          const TimeDepSet& gb) {
    RandomVariable y = law.variable(q.outcome);
    TimeDepNuisance nb = time_dep_nuisance(law, q, a, b, y);
    TimeDepNuisance ngb = time_dep_nuisance(law, q, a, gb, y);
    double total = 0;
    RandomVariable lambda = law.constant(1.0);
    for (std::size_t k = 0; k < q.treatments.size(); ++k) {
        RandomVariable prev = treatment_indicator(law, q, a, k);
        VertexSet bk = b.cumulative(k);
        // var(b_k(GB) | Abar_{k-1} = abar_{k-1}, Bbar_k)
        RandomVariable den = law.cond_expectation(prev, bk);
        RandomVariable mean = safe_divide(law.cond_expectation(prev * ngb.b[k], bk), den);
        RandomVariable dev = ngb.b[k] - mean;
        RandomVariable v = safe_divide(law.cond_expectation(prev * dev * dev, bk), den);
        RandomVariable weight = safe_divide(prev, lambda * lambda);
        RandomVariable factor = safe_divide(law.constant(1.0), nb.pi[k]) - 1.0;
        total += law.expectation(weight * factor * v);
        lambda = lambda * nb.pi[k];
    }
    return total;
}

// Right-hand side of the deletion identity, GB shrunk to G.
double td_deletion(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& g,
                   const TimeDepSet& gb) {
    RandomVariable y = law.variable(q.outcome);
    TimeDepNuisance n = time_dep_nuisance(law, q, a, gb, y);
    const std::size_t p = q.treatments.size() - 1;

    std::vector<RandomVariable> weights{law.constant(1.0)};
    RandomVariable lambda = law.constant(1.0);
    for (std::size_t k = 0; k <= p; ++k) {
        lambda = lambda * n.pi[k];
        weights.push_back(safe_divide(treatment_indicator(law, q, a, k + 1), lambda));
    }

    VertexSet given = set_union(with(g.all(), q.outcome), q.treatment_set());
    double total = law.expectation(law.cond_variance(weights[p + 1] * (y - n.b[p]), given));
    for (std::size_t k = 0; k <= p; ++k) {
        RandomVariable previous = k == 0 ? law.constant(n.chi) : n.b[k - 1];
        RandomVariable f = weights[k] * (n.b[k] - previous);
        VertexSet cond = set_union(g.cumulative(k), treatments_before(q, k));
        total += law.expectation(law.cond_variance(f, cond));
    }
    return total;
}

double var_psi_td(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& z) {
    return law.variance(psi_td(law, q, a, z));
}

}  // namespace

IdentityReport verify_identity(const DiscreteLaw& law, const Query& q, Identity id, const IdentityArgs& args) {
    IdentityReport r;
    r.identity = id;
    r.hypotheses = identity_hypotheses(law.graph(), q, id, args);
    for (const auto& c : r.hypotheses) {
        if (!c.holds) {
            throw CausalError(ErrorKind::HypothesisFailed,
                              std::string(to_string(id)) + " does not apply: " + c.statement + " fails",
                              {c.statement});
        }
    }
    const VertexSet& G = args.g;
    const VertexSet& B = args.b;
    const VertexSet GB = set_union(G, B);

    switch (id) {
        case Identity::Lemma1:
        case Identity::Lemma2:
        case Identity::Theorem1:
            for (double a : law.support(q.treatment())) {
                PointPieces p(law, q, a);
                Sides s;
                if (id == Identity::Lemma1) {
                    s = {var_psi(law, q, a, B) - var_psi(law, q, a, GB), p.supplementation(G, B)};
                } else if (id == Identity::Lemma2) {
                    s = {var_psi(law, q, a, GB) - var_psi(law, q, a, G), p.deletion(G, B)};
                } else {
                    s = {var_psi(law, q, a, B) - var_psi(law, q, a, G), p.supplementation(G, B) + p.deletion(G, B)};
                }
                accumulate(r, s);
            }
            break;
        case Identity::Lemma1Ate:
        case Identity::Lemma2Ate:
        case Identity::Theorem1Ate: {
            const auto& support = law.support(q.treatment());
            if (support.size() != 2) {
                throw CausalError(ErrorKind::InvalidArgument,
                                  std::string(to_string(id)) + " needs a binary treatment");
            }
            const double a0 = support[0];
            const double a1 = support[1];
            PointPieces p1(law, q, a1);
            PointPieces p0(law, q, a0);
            auto supplementation = [&] {
                RandomVariable cov = law.cond_covariance(p1.b(GB), p0.b(GB), B);
                return p1.supplementation(G, B) + p0.supplementation(G, B) + 2 * law.expectation(cov);
            };
            auto deletion = [&] { return p1.deletion(G, B) + p0.deletion(G, B); };
            Sides s;
            if (id == Identity::Lemma1Ate) {
                s = {var_psi_ate(law, q, a1, a0, B) - var_psi_ate(law, q, a1, a0, GB), supplementation()};
            } else if (id == Identity::Lemma2Ate) {
                s = {var_psi_ate(law, q, a1, a0, GB) - var_psi_ate(law, q, a1, a0, G), deletion()};
            } else {
                s = {var_psi_ate(law, q, a1, a0, B) - var_psi_ate(law, q, a1, a0, G),
                     supplementation() + deletion()};
            }
            accumulate(r, s);
            break;
        }
        case Identity::InvPi:
            for (double a : law.support(q.treatment())) {
                PointPieces p(law, q, a);
                RandomVariable ind = law.indicator(q.treatment(), a);
                RandomVariable lhs = safe_divide(law.cond_expectation(ind * p.inv_pi(B), G), law.cond_expectation(ind, G));
                RandomVariable rhs = p.inv_pi(G);
                const auto& prob = law.probabilities();
                for (std::size_t s = 0; s < prob.size(); ++s) {
                    if (prob[s] > 0) accumulate(r, {lhs[s], rhs[s]});
                }
            }
            break;
        case Identity::Lemma3:
        case Identity::Lemma4:
        case Identity::Theorem5: {
            const TimeDepSet& g = args.g_blocks;
            const TimeDepSet& b = args.b_blocks;
            TimeDepSet gb = blockwise_union(g, b);
            for (const auto& a : all_levels(law, q)) {
                Sides s;
                if (id == Identity::Lemma3) {
                    s = {var_psi_td(law, q, a, b) - var_psi_td(law, q, a, gb), td_supplementation(law, q, a, b, gb)};
                } else if (id == Identity::Lemma4) {
                    s = {var_psi_td(law, q, a, gb) - var_psi_td(law, q, a, g), td_deletion(law, q, a, g, gb)};
                } else {
                    s = {var_psi_td(law, q, a, b) - var_psi_td(law, q, a, g),
                         td_supplementation(law, q, a, b, gb) + td_deletion(law, q, a, g, gb)};
                }
                accumulate(r, s);
            }
            break;
        }
        case Identity::Definition1: {
            auto ys = law.support(q.outcome);
            std::sort(ys.begin(), ys.end());
            RandomVariable y = law.variable(q.outcome);
            for (const auto& a : all_levels(law, q)) {
                for (double threshold : ys) {
                    RandomVariable below(y.size());
                    for (std::size_t s = 0; s < y.size(); ++s) below[s] = y[s] <= threshold ? 1.0 : 0.0;
                    accumulate(r, {ipw_mean(law, q, a, below), iterated_mean(law, q, a, args.g_blocks, below)});
                }
            }
            r.pass = r.discrepancy <= kDefinitionOneTolerance;
            return r;
        }
    }
    r.pass = r.discrepancy <= kIdentityTolerance;
    return r;
}

Falsification falsify_time_dep(const Dag& g, const Query& q, const TimeDepSet& z, const RandomLawSpec& spec,
                               std::size_t trials) {
    check_blocks(g, q, z);
    IdentityArgs args;
    args.g_blocks = z;
    for (std::size_t i = 0; i < trials; ++i) {
        RandomLawSpec s = spec;
        s.seed = derive_seed(spec.seed, i);
        if (!verify_identity(random_law(g, s), q, Identity::Definition1, args).pass) return Falsification::Falsified;
    }
    return Falsification::NotFalsified;
}

}  // namespace causal
