#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "hers/exec.hpp"
#include "hers/graph.hpp"
#include "hers/image.hpp"

namespace hers {

struct Merge {
    NodeId u = 0;
    NodeId v = 0;
    double gain = 0.0;

    friend bool operator==(const Merge&, const Merge&) = default;
};

/// Ordered merge record of a Borůvka entropy-rate build. Cutting it after
/// node_count - k merges yields the k-superpixel partition.
struct MergeHierarchy {
    NodeId node_count = 0;
    int height = 0;  // label-map shape used by extract; 1 x node_count when unknown
    int width = 0;
    std::vector<Merge> merges;
    /// Cumulative merge count at the end of each round.
    std::vector<std::uint32_t> round_boundaries;

    std::size_t round_count() const { return round_boundaries.size(); }

    friend bool operator==(const MergeHierarchy&, const MergeHierarchy&) = default;
};

struct BuildStats {
    std::uint64_t gain_evaluations = 0;
};

/// Runs Borůvka rounds until a single tree remains. In each round every tree
/// picks its best outgoing edge by entropy-rate gain under the masses frozen
/// at round start (ties: smaller edge id); picks are deduplicated, sorted by
/// gain descending (ties: edge id ascending) and applied in that order,
/// skipping picks already joined earlier in the round.
///
/// Throws ArgumentError when the graph is disconnected.
MergeHierarchy build_hierarchy(PixelGraph graph, Exec exec = Exec::Parallel, BuildStats* stats = nullptr);

/// Applies the first node_count - k merges; labels are dense in first-occurrence
/// row-major order. Throws ArgumentError unless 1 <= k <= node_count.
LabelMap extract(const MergeHierarchy& hierarchy, std::uint32_t k);

/// Same result as calling extract for each k; `ks` must be ascending. Shares a
/// single replay pass.
std::vector<LabelMap> extract_many(const MergeHierarchy& hierarchy, std::span<const std::uint32_t> ks);

// HRS1: "HRS1", u32 node_count, u32 merge_count, u32 round_count, then
// merge_count x (u32 u, u32 v, f32 gain), then round_count x u32 boundary.
// All little-endian. The file carries no image shape: read_hierarchy returns
// a 1 x node_count shape which callers may override.
void write_hierarchy(const MergeHierarchy& hierarchy, const std::filesystem::path& path);
MergeHierarchy read_hierarchy(const std::filesystem::path& path);

/// Sets the extraction shape; throws ArgumentError unless height*width == node_count.
void set_shape(MergeHierarchy& hierarchy, int height, int width);

}  // namespace hers
