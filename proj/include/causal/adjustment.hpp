#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "causal/dag.hpp"

namespace causal {

// Why a set passed or failed a validity/minimality check.
struct AdjustmentReason {
    enum class Kind { Ok, ForbiddenHit, OpenPath, Removable };
    Kind kind = Kind::Ok;
    // ForbiddenHit: the forbidden members of the set. OpenPath: the vertices of
    // an open non-causal path from a treatment to the outcome. Removable: every
    // vertex whose removal alone keeps the set valid.
    std::vector<std::string> witness;
};

const char* to_string(AdjustmentReason::Kind kind);

struct AdjustmentReport {
    VertexSet set;
    bool valid = false;
    bool minimal = false;
    AdjustmentReason reason;
};

enum class VerdictKind { FirstDominates, SecondDominates, Equivalent, Inconclusive };

const char* to_string(VerdictKind kind);

struct Condition {
    std::string statement;  // e.g. "A _||_ {W2} | {O1,O2}"
    bool holds = false;
};

struct Verdict {
    VerdictKind kind = VerdictKind::Inconclusive;
    std::vector<Condition> conditions;
};

// Renders "X _||_ Y | Z" for condition listings.
std::string independence_statement(const VertexSet& x, const VertexSet& y, const VertexSet& z);

// Vertices other than the treatments on a proper causal path from a treatment
// to the outcome.
VertexSet causal_nodes(const Dag& g, const Query& q);
VertexSet forbidden(const Dag& g, const Query& q);

// Throws InvalidSet if z meets the treatments or the outcome.
AdjustmentReport is_valid_adjustment(const Dag& g, const Query& q, const VertexSet& z);
AdjustmentReport is_minimal_adjustment(const Dag& g, const Query& q, const VertexSet& z);

// Throws NoAdjustmentSet when no valid time-independent set exists.
VertexSet optimal_set(const Dag& g, const Query& q);
// Point treatments only; throws Unsupported otherwise.
VertexSet optimal_minimal_set(const Dag& g, const Query& q);
// Greedy removal in the given order, repeated to a fixpoint. Exposed so tests
// can check that the result does not depend on the order.
VertexSet optimal_minimal_set(const Dag& g, const Query& q, const std::vector<std::string>& order);

// Throws InvalidSet if either set is not a valid adjustment set.
Verdict compare_theorem1(const Dag& g, const Query& q, const VertexSet& first,
                         const VertexSet& second);

VertexSet prune_adjustment(const Dag& g, const Query& q, const VertexSet& z);

inline constexpr std::size_t kDefaultAdjustmentGuard = 16;

// All valid sets drawn from `candidates` (every non-treatment, non-outcome
// vertex when empty), ordered by size and then lexicographically. Throws
// GuardExceeded when the candidate pool is larger than max_vertices.
std::vector<VertexSet> enumerate_adjustment_sets(const Dag& g, const Query& q,
                                                 std::size_t max_vertices = kDefaultAdjustmentGuard,
                                                 const VertexSet& candidates = {});

// Valid sets with no valid proper subset, by brute force over all subsets.
std::vector<VertexSet> minimal_sets_brute_force(const Dag& g, const Query& q,
                                                std::size_t max_vertices = kDefaultAdjustmentGuard,
                                                const VertexSet& candidates = {});

// Orders sets by size, then lexicographically.
bool set_order(const VertexSet& a, const VertexSet& b);

}  // namespace causal
