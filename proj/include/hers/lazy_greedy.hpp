#pragma once

#include <cstdint>
#include <vector>

#include "hers/graph.hpp"
#include "hers/image.hpp"

namespace hers {

struct GreedyResult {
    LabelMap labels;
    /// Accepted edges in selection order.
    std::vector<EdgeId> selected;
    std::uint64_t gain_evaluations = 0;
    std::uint64_t stale_pops = 0;
};

/// Priority-queue greedy entropy-rate edge selection down to k components.
/// Popped entries are revalidated against the current masses: stale entries
/// are recomputed and reinserted, entries joining one tree are discarded.
/// Ties: gain descending, edge id ascending. Throws ArgumentError for k out of
/// range or a graph that cannot reach k components.
GreedyResult lazy_greedy_segment(PixelGraph graph, std::uint32_t k);

}  // namespace hers
