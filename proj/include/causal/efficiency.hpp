#pragma once

#include <set>
#include <string>
#include <vector>

#include "causal/dag.hpp"

namespace causal {

// Symbols of the efficient influence function formulas. With b = b_a(O) and
// IPW = I_a(A) / pi_a(O_min):
//   Chi          the interventional mean chi_a
//   BAtom        b itself
//   BCond(S)     E[b | S]
//   TCond(S)     E[T | S] with T = I_a(A) Y / pi_a(O_min)
//   IPWY         IPW * Y
//   IPWB         IPW * b
//   IPWResidual  IPW * (Y - b)
//   Zero         the zero function, only ever as the sole term
enum class TermKind { BAtom, Chi, BCond, TCond, IPWY, IPWB, IPWResidual, Zero };

const char* to_string(TermKind kind);

struct Term {
    TermKind kind = TermKind::Zero;
    VertexSet set;  // conditioning set of BCond and TCond, empty otherwise

    auto operator<=>(const Term&) const = default;
};

struct SignedTerm {
    int coefficient = 1;
    Term term;

    bool operator==(const SignedTerm&) const = default;
};

// Canonical signed sum. Construct through `canonical`, which applies the
// rewrites E[b | {}] = chi, E[b | S] = b for S containing O, E[T | {}] = chi,
// sorts the terms and merges equal ones.
class EifExpr {
public:
    std::string treatment;
    std::string outcome;
    VertexSet O;
    VertexSet O_min;

    static EifExpr canonical(std::string treatment, std::string outcome, VertexSet O,
                             VertexSet O_min, const std::vector<SignedTerm>& terms);

    const std::vector<SignedTerm>& terms() const { return terms_; }
    bool is_zero() const;

    // Every vertex the formula depends on.
    VertexSet mentioned() const;

    std::string to_text() const;

    EifExpr operator+(const EifExpr& other) const;
    bool operator==(const EifExpr& other) const;

private:
    std::vector<SignedTerm> terms_;
};

// b - chi + IPW*(Y - b), the influence function of the optimally adjusted
// estimator.
EifExpr psi_canonical(const std::string& treatment, const std::string& outcome,
                      const VertexSet& O, const VertexSet& O_min);

struct Partition {
    std::vector<std::string> W;  // non-descendants of A, topologically sorted
    std::string A;
    std::vector<std::string> M;  // mediators, topologically sorted
    std::string Y;
};

struct EfficiencyReport {
    bool efficient = false;
    bool efficient_nondesc = false;
    bool efficient_desc = false;
    std::set<int> offenders_nondesc;
    std::set<int> offenders_desc;
    EifExpr eif;
    Dag pruned_graph;
    Partition partition;
    VertexSet O;
    VertexSet O_min;
    VertexSet uninformative;
};

VertexSet indirect_nodes(const Dag& g, const Query& q);
VertexSet irrelevant_nodes(const Dag& g, const Query& q);

// Restricts to an(Y) and exogenizes the indirect vertices in reverse
// topological order.
Dag prune(const Dag& g, const Query& q);

// Point treatment with A an ancestor of Y; throws Unsupported or
// InvalidArgument otherwise.
EfficiencyReport check_efficient(const Dag& g, const Query& q);

// Offender scans on the pruned graph. Indices are 1-based positions in W, and
// in M extended with M_{K+1} = Y.
std::set<int> offenders_nondesc(const Dag& g, const std::vector<std::string>& W,
                                const VertexSet& O, int init);
std::set<int> offenders_desc(const Dag& g, const std::string& treatment,
                             const std::string& outcome, const std::vector<std::string>& M,
                             const VertexSet& O_min, int init);

}  // namespace causal
