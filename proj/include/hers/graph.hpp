#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "hers/image.hpp"

namespace hers {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

struct Edge {
    NodeId u = 0;
    NodeId v = 0;
    double weight = 0.0;  // raw, un-normalized
};

struct EdgeGain {
    EdgeId edge = 0;
    double gain = 0.0;  // nats
};

/// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Entropy-rate contribution of adding an edge with normalized weight `w`
/// between nodes of current masses `mi`, `mj`:
///   (w+mi)log(w+mi) + (w+mj)log(w+mj) - mi log mi - mj log mj - 2 w log w
inline double gain_formula(double w, double mi, double mj) {
    if (w == 0.0) return 0.0;  // terms cancel exactly; avoid round-off residue
    return xlogx(w + mi) + xlogx(w + mj) - xlogx(mi) - xlogx(mj) - 2.0 * xlogx(w);
}

/// Undirected weighted graph with per-node masses. Masses start at the
/// stationary distribution w_u / w_T and grow by w/w_T on each committed edge.
class PixelGraph {
public:
    /// General edge-list construction (lattice graphs come from build_graph).
    /// Throws ArgumentError for out-of-range endpoints, self-loops, negative
    /// or non-finite weights, or a zero total weight.
    static PixelGraph from_edges(NodeId node_count, std::vector<Edge> edges);

    NodeId node_count() const { return node_count_; }
    std::size_t edge_count() const { return edges_.size(); }
    const Edge& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// 0 for graphs not built from an image lattice.
    int height() const { return height_; }
    int width() const { return width_; }

    double w_total() const { return w_total_; }
    double node_weight(NodeId u) const { return node_weight_[u]; }
    double normalized_weight(EdgeId e) const { return norm_weight_[e]; }
    double stationary(NodeId u) const { return node_weight_[u] / w_total_; }

    double mass(NodeId u) const { return mass_[u]; }
    std::span<const double> masses() const { return mass_; }
    bool committed(EdgeId e) const { return committed_[e] != 0; }

    /// Edges incident to `u`, ascending by id.
    std::span<const EdgeId> incident(NodeId u) const {
        return std::span<const EdgeId>(adj_).subspan(adj_offset_[u], adj_offset_[u + 1] - adj_offset_[u]);
    }

private:
    friend void commit_edge(PixelGraph& graph, EdgeId e);
    friend PixelGraph build_graph(const AffinityMap& map);

    PixelGraph() = default;
    void finalize();

    NodeId node_count_ = 0;
    int height_ = 0;
    int width_ = 0;
    std::vector<Edge> edges_;
    std::vector<double> norm_weight_;
    std::vector<double> node_weight_;
    std::vector<double> mass_;
    std::vector<std::uint8_t> committed_;
    std::vector<std::size_t> adj_offset_;
    std::vector<EdgeId> adj_;
    double w_total_ = 0.0;
};

/// 8-connected lattice graph; edge weight (a_pq + a_qp)/2. Edges are emitted
/// row-major from the smaller endpoint in the order E, SE, S, SW.
PixelGraph build_graph(const AffinityMap& map);

/// Number of undirected 8-neighbor pairs of an H x W lattice.
std::size_t lattice_edge_count(int height, int width);

/// Entropy rate (nats) of the random walk whose transitions are the selected
/// edges, with each node's unselected incident weight kept as a self-loop.
double entropy_rate(const PixelGraph& graph, std::span<const EdgeId> selected);

/// Gain of `e` under the graph's current masses.
EdgeGain edge_gain(const PixelGraph& graph, EdgeId e);

/// m_u += w, m_v += w. Throws std::logic_error on a second commit of `e`.
void commit_edge(PixelGraph& graph, EdgeId e);

}  // namespace hers
