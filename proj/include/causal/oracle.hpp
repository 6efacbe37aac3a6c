#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "causal/adjustment.hpp"
#include "causal/efficiency.hpp"
#include "causal/law.hpp"
#include "causal/time_dependent.hpp"

namespace causal {

// One level per treatment, in the query's temporal order.
using Levels = std::vector<double>;

// The last support value of every treatment, e.g. a = 1 for binary {0, 1}.
Levels default_levels(const DiscreteLaw& law, const Query& q);

// Product of I_{a_j}(A_j) over the first `count` treatments.
RandomVariable treatment_indicator(const DiscreteLaw& law, const Query& q, const Levels& a,
                                   std::size_t count);

// E[Y_a] by the truncated factorization.
double g_formula(const DiscreteLaw& law, const Query& q, const Levels& a);
double g_formula(const DiscreteLaw& law, const Query& q, const Levels& a, const RandomVariable& outcome);
// E[prod_k I_{a_k}(A_k) / P(A_k = a_k | pa(A_k)) * Y].
double ipw_mean(const DiscreteLaw& law, const Query& q, const Levels& a);
double ipw_mean(const DiscreteLaw& law, const Query& q, const Levels& a, const RandomVariable& outcome);

// Point treatment: pi_a(Z) = P(A = a | Z) and b_a(Z) = E[Y | A = a, Z].
RandomVariable propensity(const DiscreteLaw& law, const std::string& treatment, double a,
                          const VertexSet& z);
RandomVariable outcome_regression(const DiscreteLaw& law, const Query& q, double a, const VertexSet& z);

// I_a(A) / pi_a(Z) (Y - b_a(Z)) + b_a(Z) - chi_a.
RandomVariable psi_ti(const DiscreteLaw& law, const Query& q, double a, const VertexSet& z);

// Time-dependent nuisance functions for blocks Z_0..Z_p. Every function is
// stored on the full state space but depends only on the cumulative blocks.
struct TimeDepNuisance {
    std::vector<RandomVariable> pi;  // pi_k(Zbar_k)
    std::vector<RandomVariable> b;   // b_k(Zbar_k), k = 0..p
    double chi = 0;
};

TimeDepNuisance time_dep_nuisance(const DiscreteLaw& law, const Query& q, const Levels& a,
                                  const TimeDepSet& z, const RandomVariable& outcome);

// Iterated conditional expectation of `outcome`, the right-hand side of the
// time dependent adjustment identity.
double iterated_mean(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& z,
                     const RandomVariable& outcome);

// Influence function with the lambda products and g_k corrections.
RandomVariable psi_td(const DiscreteLaw& law, const Query& q, const Levels& a, const TimeDepSet& z);
// The same function written as a telescoping sum of weighted residuals.
RandomVariable psi_td_telescoping(const DiscreteLaw& law, const Query& q, const Levels& a,
                                  const TimeDepSet& z);

// Evaluates each term of the expression exactly. `q` must be a point query on
// the law's graph.
RandomVariable eval_eif(const DiscreteLaw& law, const Query& q, double a, const EifExpr& e);

// Efficient influence function from the definition: the sum over relevant
// vertices of E[J | V, pa(V)] - E[J | pa(V)] with J = I_a(A) Y / P(A = a | pa(A)).
RandomVariable eif_relevant_sum(const DiscreteLaw& law, const Query& q, double a);
// The same projection summed over every vertex.
RandomVariable eif_full_projection(const DiscreteLaw& law, const Query& q, double a);

// Central finite-difference derivative of chi_a along one CPT row of each
// vertex, compared with E[eif * score].
struct DerivativeCheck {
    std::string vertex;
    double finite_difference = 0;
    double analytic = 0;
    bool pass = false;
};

inline constexpr double kDerivativeStep = 1e-4;
inline constexpr double kDerivativeRelTolerance = 1e-5;
// chi is linear in each CPT row, so the central difference is exact up to
// rounding of order 1e-16 / h.
inline constexpr double kDerivativeAbsFloor = 1e-10;

std::vector<DerivativeCheck> derivative_checks(const DiscreteLaw& law, const Query& q, double a,
                                               const RandomVariable& eif, double h = kDerivativeStep);

enum class Identity {
    Lemma1,
    Lemma2,
    Theorem1,
    Lemma1Ate,
    Lemma2Ate,
    Theorem1Ate,
    Lemma3,
    Lemma4,
    Theorem5,
    InvPi,
    Definition1,
};

const char* to_string(Identity id);
// Throws InvalidArgument for unknown names.
Identity parse_identity(const std::string& name);
std::vector<Identity> all_identities();
bool is_time_dependent(Identity id);

// Sets the identity is stated for. Time independent identities read `g` and
// `b`; time dependent ones read the blocks. Definition1 and InvPi use `g` or
// `g_blocks` as the set under test and, for InvPi, `b` as Z_2.
struct IdentityArgs {
    VertexSet g;
    VertexSet b;
    TimeDepSet g_blocks;
    TimeDepSet b_blocks;
};

// Graphical hypotheses of the identity, one entry per d-separation or
// adjustment requirement.
std::vector<Condition> identity_hypotheses(const Dag& graph, const Query& q, Identity id,
                                           const IdentityArgs& args);

inline constexpr double kIdentityTolerance = 1e-9;
inline constexpr double kDefinitionOneTolerance = 1e-10;

struct IdentityReport {
    Identity identity = Identity::Lemma1;
    double lhs = 0;
    double rhs = 0;
    double discrepancy = 0;
    bool pass = false;
    std::vector<Condition> hypotheses;
};

// Evaluates both sides for every treatment level (both levels at once for
// the ATE forms) and reports the worst discrepancy. Throws HypothesisFailed
// naming the first failing hypothesis.
IdentityReport verify_identity(const DiscreteLaw& law, const Query& q, Identity id,
                               const IdentityArgs& args);

// Runs the iterated expectation identity for `z` on `trials` random laws.
Falsification falsify_time_dep(const Dag& g, const Query& q, const TimeDepSet& z,
                               const RandomLawSpec& spec, std::size_t trials);

struct Witness {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    DiscreteLaw law;
};

// Tries laws seeded with derive_seed(spec.seed, i) for i = 0, 1, ... and
// returns the first one satisfying the predicate.
std::optional<Witness> search_witness(const Dag& g, const RandomLawSpec& spec,
                                      const std::function<bool(const DiscreteLaw&)>& predicate,
                                      std::size_t max_trials);

// The family P_alpha on O1, O2 -> A -> Y, O1, O2 -> Y with fair +-1
// covariates and b_a(O) = O1 + O2 + alpha O1 O2.
DiscreteLaw are_law(const Dag& g, double alpha);

}  // namespace causal
