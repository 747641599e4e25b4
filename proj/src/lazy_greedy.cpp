#include "hers/lazy_greedy.hpp"

#include <queue>
#include <string>

#include "hers/disjoint_set.hpp"
#include "hers/error.hpp"

namespace hers {

namespace {

struct Entry {
    double gain;
    EdgeId edge;
    std::uint32_t version_u;  // endpoint mass versions at evaluation time
    std::uint32_t version_v;
};

// Max-heap on gain, then smallest edge id.
struct EntryLess {
    bool operator()(const Entry& a, const Entry& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.edge > b.edge;
    }
};

}  // namespace

GreedyResult lazy_greedy_segment(PixelGraph graph, std::uint32_t k) {
    const NodeId n = graph.node_count();
    if (k < 1 || k > n) throw ArgumentError("k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");

    GreedyResult result;
    DisjointSet ds(n);
    // Mass version per node; bumped whenever a commit changes the node's mass.
    std::vector<std::uint32_t> version(n, 0);
    std::priority_queue<Entry, std::vector<Entry>, EntryLess> heap;

    auto evaluate = [&](EdgeId e) {
        ++result.gain_evaluations;
        const Edge& edge = graph.edge(e);
        heap.push(Entry{edge_gain(graph, e).gain, e, version[edge.u], version[edge.v]});
    };

    for (EdgeId e = 0; e < graph.edge_count(); ++e) evaluate(e);

    while (ds.components() > k) {
        if (heap.empty()) throw ArgumentError("graph cannot be reduced to " + std::to_string(k) + " components");
        const Entry top = heap.top();
        heap.pop();
        const Edge& edge = graph.edge(top.edge);
        if (ds.same(edge.u, edge.v)) continue;
        if (top.version_u != version[edge.u] || top.version_v != version[edge.v]) {
            ++result.stale_pops;
            evaluate(top.edge);
            continue;
        }

        ds.unite(edge.u, edge.v);
        commit_edge(graph, top.edge);
        result.selected.push_back(top.edge);
        ++version[edge.u];
        ++version[edge.v];
        // Gains grow with endpoint mass, so old cached values under-estimate:
        // re-key every edge touching the two updated nodes.
        for (NodeId x : {edge.u, edge.v}) {
            for (EdgeId e : graph.incident(x)) {
                const Edge& other = graph.edge(e);
                if (!ds.same(other.u, other.v)) evaluate(e);
            }
        }
    }

    std::vector<std::uint32_t> roots(n);
    for (NodeId u = 0; u < n; ++u) roots[u] = ds.find(u);
    const int height = graph.height() > 0 ? graph.height() : 1;
    const int width = graph.width() > 0 ? graph.width() : static_cast<int>(n);
    result.labels = LabelMap::densify(height, width, roots);
    return result;
}

}  // namespace hers
