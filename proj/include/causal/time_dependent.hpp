#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "causal/adjustment.hpp"
#include "causal/dag.hpp"

namespace causal {

// One covariate block per treatment, (Z_0, ..., Z_p).
struct TimeDepSet {
    std::vector<VertexSet> blocks;

    // Z_0 united with ... Z_k.
    VertexSet cumulative(std::size_t k) const;
    VertexSet all() const;
    bool operator==(const TimeDepSet&) const = default;
};

std::string format_blocks(const TimeDepSet& z);

enum class Falsification { NotRun, Falsified, NotFalsified };

const char* to_string(Falsification f);

struct TimeDepReport {
    bool sufficient_criterion = false;
    // Index of the first block whose condition failed, when the criterion fails.
    std::optional<std::size_t> failed_block;
    std::string failure;
    // Filled in by the oracle when requested.
    Falsification oracle = Falsification::NotRun;
};

TimeDepSet canonical_time_dep_set(const Dag& g, const Query& q);

// Throws InvalidSet when the blocks overlap, touch the treatments or the
// outcome, or their count differs from the number of treatments.
void check_blocks(const Dag& g, const Query& q, const TimeDepSet& z);

TimeDepReport is_valid_time_dep(const Dag& g, const Query& q, const TimeDepSet& z);

// G with the out-edges of A_k and the in-edges of A_{k+1..p} removed.
Dag manipulated_graph(const Dag& g, const Query& q, std::size_t k);

inline constexpr std::size_t kDefaultTimeDepGuard = 12;

// Every assignment of candidate vertices to a block or to no block that
// passes the sufficient criterion, ordered by total size and then blockwise.
std::vector<TimeDepSet> enumerate_time_dep(const Dag& g, const Query& q,
                                           std::size_t max_vertices = kDefaultTimeDepGuard,
                                           const VertexSet& candidates = {});

// First plays G and second plays B in the three condition families.
Verdict compare_theorem5(const Dag& g, const Query& q, const TimeDepSet& first,
                         const TimeDepSet& second);

}  // namespace causal
