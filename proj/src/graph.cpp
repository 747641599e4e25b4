#include "hers/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "hers/error.hpp"

namespace hers {

namespace {

constexpr std::array<int, 4> kForward{static_cast<int>(Dir::E), static_cast<int>(Dir::SE), static_cast<int>(Dir::S),
                                      static_cast<int>(Dir::SW)};

}  // namespace

PixelGraph PixelGraph::from_edges(NodeId node_count, std::vector<Edge> edges) {
    for (const Edge& e : edges) {
        if (e.u >= node_count || e.v >= node_count) throw ArgumentError("edge endpoint out of range");
        if (e.u == e.v) throw ArgumentError("self-loop edges are not allowed");
        if (!(e.weight >= 0.0) || !std::isfinite(e.weight)) throw ArgumentError("edge weights must be finite and >= 0");
    }
    PixelGraph g;
    g.node_count_ = node_count;
    g.height_ = 0;
    g.width_ = 0;
    g.edges_ = std::move(edges);
    g.finalize();
    return g;
}

void PixelGraph::finalize() {
    node_weight_.assign(node_count_, 0.0);
    std::vector<std::size_t> degree(node_count_, 0);
    for (const Edge& e : edges_) {
        node_weight_[e.u] += e.weight;
        node_weight_[e.v] += e.weight;
        ++degree[e.u];
        ++degree[e.v];
    }
    w_total_ = 0.0;
    for (double w : node_weight_) w_total_ += w;
    if (!(w_total_ > 0.0)) throw ArgumentError("graph has zero total weight (all-zero affinities)");

    norm_weight_.resize(edges_.size());
    for (std::size_t i = 0; i < edges_.size(); ++i) norm_weight_[i] = edges_[i].weight / w_total_;
    mass_.resize(node_count_);
    for (NodeId u = 0; u < node_count_; ++u) mass_[u] = node_weight_[u] / w_total_;
    committed_.assign(edges_.size(), 0);

    adj_offset_.assign(node_count_ + 1, 0);
    for (NodeId u = 0; u < node_count_; ++u) adj_offset_[u + 1] = adj_offset_[u] + degree[u];
    adj_.resize(adj_offset_[node_count_]);
    std::vector<std::size_t> fill(adj_offset_.begin(), adj_offset_.end() - 1);
    for (EdgeId i = 0; i < edges_.size(); ++i) {
        adj_[fill[edges_[i].u]++] = i;
        adj_[fill[edges_[i].v]++] = i;
    }
}

std::size_t lattice_edge_count(int height, int width) {
    if (height <= 0 || width <= 0) return 0;
    const auto h = static_cast<std::size_t>(height);
    const auto w = static_cast<std::size_t>(width);
    // horizontal + vertical + two diagonal families
    return h * (w - 1) + (h - 1) * w + 2 * (h - 1) * (w - 1);
}

PixelGraph build_graph(const AffinityMap& map) {
    const int h = map.height();
    const int w = map.width();
    PixelGraph g;
    g.node_count_ = static_cast<NodeId>(map.size());
    g.height_ = h;
    g.width_ = w;
    g.edges_.reserve(lattice_edge_count(h, w));
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            for (int d : kForward) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                const std::size_t q = static_cast<std::size_t>(nr) * w + nc;
                const double weight = (static_cast<double>(map.at(d, p)) + static_cast<double>(map.at(opposite(d), q))) / 2.0;
                g.edges_.push_back(Edge{static_cast<NodeId>(p), static_cast<NodeId>(q), weight});
            }
        }
    }
    g.finalize();
    return g;
}

double entropy_rate(const PixelGraph& graph, std::span<const EdgeId> selected) {
    std::vector<std::uint8_t> chosen(graph.edge_count(), 0);
    for (EdgeId e : selected) {
        if (e >= graph.edge_count()) throw ArgumentError("selected edge id out of range");
        chosen[e] = 1;
    }
    double rate = 0.0;
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        const double wu = graph.node_weight(u);
        if (!(wu > 0.0)) continue;
        double node_sum = 0.0;
        double selected_prob = 0.0;
        for (EdgeId e : graph.incident(u)) {
            if (!chosen[e]) continue;
            const double p = graph.edge(e).weight / wu;
            node_sum += xlogx(p);
            selected_prob += p;
        }
        // Unselected incident weight stays on u as a self-loop.
        node_sum += xlogx(std::max(0.0, 1.0 - selected_prob));
        rate -= (wu / graph.w_total()) * node_sum;
    }
    return rate;
}

EdgeGain edge_gain(const PixelGraph& graph, EdgeId e) {
    const Edge& edge = graph.edge(e);
    return EdgeGain{e, gain_formula(graph.normalized_weight(e), graph.mass(edge.u), graph.mass(edge.v))};
}

void commit_edge(PixelGraph& graph, EdgeId e) {
    if (e >= graph.edge_count()) throw ArgumentError("edge id out of range");
    if (graph.committed_[e]) throw std::logic_error("edge " + std::to_string(e) + " committed twice");
    graph.committed_[e] = 1;
    const double w = graph.norm_weight_[e];
    graph.mass_[graph.edges_[e].u] += w;
    graph.mass_[graph.edges_[e].v] += w;
}

}  // namespace hers
