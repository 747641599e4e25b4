#include "hers/hierarchy.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "hers/disjoint_set.hpp"
#include "hers/error.hpp"

namespace hers {

namespace {

constexpr EdgeId kNoEdge = std::numeric_limits<EdgeId>::max();

struct Pick {
    EdgeId edge;
    double gain;
};

// (gain desc, edge id asc) is a strict total order over picks.
bool better(double gain, EdgeId edge, double best_gain, EdgeId best_edge) {
    return gain > best_gain || (gain == best_gain && edge < best_edge);
}

void evaluate_gains(const PixelGraph& graph, const std::vector<EdgeId>& live, std::vector<double>& gains, Exec exec) {
    gains.resize(live.size());
    const auto n = static_cast<std::ptrdiff_t>(live.size());
    if (exec == Exec::Serial) {
        for (std::ptrdiff_t i = 0; i < n; ++i) gains[i] = edge_gain(graph, live[i]).gain;
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < n; ++i) gains[i] = edge_gain(graph, live[i]).gain;
    }
}

LabelMap snapshot(DisjointSet& ds, const MergeHierarchy& h, std::vector<std::uint32_t>& roots) {
    roots.resize(h.node_count);
    for (NodeId u = 0; u < h.node_count; ++u) roots[u] = ds.find(u);
    return LabelMap::densify(h.height, h.width, roots);
}

void check_k(const MergeHierarchy& h, std::uint32_t k) {
    if (k < 1 || k > h.node_count) {
        throw ArgumentError("k = " + std::to_string(k) + " outside [1, " + std::to_string(h.node_count) + "]");
    }
    if (h.merges.size() + 1 < h.node_count) {
        throw ArgumentError("hierarchy is incomplete: " + std::to_string(h.merges.size()) + " merges for " +
                            std::to_string(h.node_count) + " nodes");
    }
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

std::uint32_t get_u32(const std::string& bytes, std::size_t& pos) {
    if (bytes.size() - pos < 4) throw FormatError("HRS1: truncated payload");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[pos + i])) << (8 * i);
    pos += 4;
    return v;
}

}  // namespace

MergeHierarchy build_hierarchy(PixelGraph graph, Exec exec, BuildStats* stats) {
    const NodeId n = graph.node_count();
    MergeHierarchy h;
    h.node_count = n;
    h.height = graph.height() > 0 ? graph.height() : 1;
    h.width = graph.width() > 0 ? graph.width() : static_cast<int>(n);
    h.merges.reserve(n > 0 ? n - 1 : 0);

    DisjointSet ds(n);
    std::vector<EdgeId> live(graph.edge_count());
    for (EdgeId e = 0; e < live.size(); ++e) live[e] = e;
    std::vector<NodeId> root(n);
    std::vector<double> gains;
    std::vector<EdgeId> best_edge(n);
    std::vector<double> best_gain(n);
    std::vector<Pick> picks;
    std::uint64_t evaluations = 0;

    while (ds.components() > 1) {
        for (NodeId u = 0; u < n; ++u) root[u] = ds.find(u);
        // Internal edges never become outgoing again.
        std::erase_if(live, [&](EdgeId e) { return root[graph.edge(e).u] == root[graph.edge(e).v]; });

        evaluate_gains(graph, live, gains, exec);
        evaluations += live.size();

        std::fill(best_edge.begin(), best_edge.end(), kNoEdge);
        for (std::size_t i = 0; i < live.size(); ++i) {
            const Edge& edge = graph.edge(live[i]);
            for (NodeId r : {root[edge.u], root[edge.v]}) {
                if (best_edge[r] == kNoEdge || better(gains[i], live[i], best_gain[r], best_edge[r])) {
                    best_edge[r] = live[i];
                    best_gain[r] = gains[i];
                }
            }
        }

        picks.clear();
        for (NodeId u = 0; u < n; ++u) {
            if (root[u] != u) continue;
            if (best_edge[u] == kNoEdge) throw ArgumentError("graph is disconnected: a tree has no outgoing edge");
            picks.push_back(Pick{best_edge[u], best_gain[u]});
        }
        std::sort(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return better(a.gain, a.edge, b.gain, b.edge); });
        // Mutual picks are the same edge, hence adjacent after sorting.
        picks.erase(std::unique(picks.begin(), picks.end(), [](const Pick& a, const Pick& b) { return a.edge == b.edge; }),
                    picks.end());

        for (const Pick& pick : picks) {
            const Edge& edge = graph.edge(pick.edge);
            if (!ds.unite(edge.u, edge.v)) continue;
            commit_edge(graph, pick.edge);
            h.merges.push_back(Merge{edge.u, edge.v, pick.gain});
        }
        h.round_boundaries.push_back(static_cast<std::uint32_t>(h.merges.size()));
    }

    if (stats) stats->gain_evaluations = evaluations;
    return h;
}

LabelMap extract(const MergeHierarchy& hierarchy, std::uint32_t k) {
    check_k(hierarchy, k);
    DisjointSet ds(hierarchy.node_count);
    const std::size_t apply = hierarchy.node_count - k;
    for (std::size_t i = 0; i < apply; ++i) ds.unite(hierarchy.merges[i].u, hierarchy.merges[i].v);
    std::vector<std::uint32_t> roots;
    return snapshot(ds, hierarchy, roots);
}

std::vector<LabelMap> extract_many(const MergeHierarchy& hierarchy, std::span<const std::uint32_t> ks) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
        check_k(hierarchy, ks[i]);
        if (i > 0 && ks[i] < ks[i - 1]) throw ArgumentError("k list must be ascending");
    }
    std::vector<LabelMap> out(ks.size());
    DisjointSet ds(hierarchy.node_count);
    std::vector<std::uint32_t> roots;
    std::size_t applied = 0;
    // Largest k needs the fewest merges: walk the list backwards.
    for (std::size_t i = ks.size(); i-- > 0;) {
        const std::size_t target = hierarchy.node_count - ks[i];
        for (; applied < target; ++applied) ds.unite(hierarchy.merges[applied].u, hierarchy.merges[applied].v);
        if (i + 1 < ks.size() && ks[i] == ks[i + 1]) {
            out[i] = out[i + 1];
        } else {
            out[i] = snapshot(ds, hierarchy, roots);
        }
    }
    return out;
}

void write_hierarchy(const MergeHierarchy& hierarchy, const std::filesystem::path& path) {
    std::string bytes = "HRS1";
    bytes.reserve(16 + 12 * hierarchy.merges.size() + 4 * hierarchy.round_boundaries.size());
    put_u32(bytes, hierarchy.node_count);
    put_u32(bytes, static_cast<std::uint32_t>(hierarchy.merges.size()));
    put_u32(bytes, static_cast<std::uint32_t>(hierarchy.round_boundaries.size()));
    for (const Merge& m : hierarchy.merges) {
        put_u32(bytes, m.u);
        put_u32(bytes, m.v);
        put_u32(bytes, std::bit_cast<std::uint32_t>(static_cast<float>(m.gain)));
    }
    for (std::uint32_t b : hierarchy.round_boundaries) put_u32(bytes, b);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

MergeHierarchy read_hierarchy(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() < 4 || bytes.compare(0, 4, "HRS1") != 0) throw FormatError(path.string() + ": bad magic");

    std::size_t pos = 4;
    MergeHierarchy h;
    h.node_count = get_u32(bytes, pos);
    const std::uint32_t merge_count = get_u32(bytes, pos);
    const std::uint32_t round_count = get_u32(bytes, pos);
    if (h.node_count == 0) throw FormatError(path.string() + ": zero nodes");
    if (merge_count >= h.node_count) throw FormatError(path.string() + ": more merges than node_count - 1");
    if (bytes.size() - pos < 12ull * merge_count + 4ull * round_count) throw FormatError(path.string() + ": truncated payload");

    DisjointSet ds(h.node_count);
    h.merges.resize(merge_count);
    for (Merge& m : h.merges) {
        m.u = get_u32(bytes, pos);
        m.v = get_u32(bytes, pos);
        m.gain = static_cast<double>(std::bit_cast<float>(get_u32(bytes, pos)));
        if (m.u >= h.node_count || m.v >= h.node_count) throw FormatError(path.string() + ": merge endpoint out of range");
        if (!ds.unite(m.u, m.v)) throw FormatError(path.string() + ": merge joins nodes already in one tree");
    }
    h.round_boundaries.resize(round_count);
    std::uint32_t previous = 0;
    for (std::uint32_t& b : h.round_boundaries) {
        b = get_u32(bytes, pos);
        if (b < previous || b > merge_count) throw FormatError(path.string() + ": bad round boundary");
        previous = b;
    }
    h.height = 1;
    h.width = static_cast<int>(h.node_count);
    return h;
}

void set_shape(MergeHierarchy& hierarchy, int height, int width) {
    if (height <= 0 || width <= 0 ||
        static_cast<std::uint64_t>(height) * static_cast<std::uint64_t>(width) != hierarchy.node_count) {
        throw ArgumentError("shape " + std::to_string(height) + "x" + std::to_string(width) + " does not match " +
                            std::to_string(hierarchy.node_count) + " nodes");
    }
    hierarchy.height = height;
    hierarchy.width = width;
}

}  // namespace hers
