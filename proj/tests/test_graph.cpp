#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "hers/affinity.hpp"
#include "hers/error.hpp"
#include "hers/graph.hpp"
#include "oracles.hpp"

namespace hers {
namespace {

AffinityMap full_map(int h, int w, float v) {
    AffinityMap map(h, w, std::vector<float>(static_cast<std::size_t>(kDirs) * h * w, v));
    map.zero_out_of_frame();
    return map;
}

// Counts unordered in-frame 8-neighbor pairs by enumeration.
std::size_t enumerate_pairs(int h, int w) {
    std::set<std::pair<int, int>> pairs;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                const int a = r * w + c;
                const int b = nr * w + nc;
                pairs.insert({std::min(a, b), std::max(a, b)});
            }
        }
    }
    return pairs.size();
}

TEST(BuildGraph, EdgeCounts) {
    EXPECT_EQ(build_graph(full_map(2, 2, 1.f)).edge_count(), 6u);
    EXPECT_EQ(build_graph(full_map(3, 3, 1.f)).edge_count(), 20u);
    EXPECT_EQ(enumerate_pairs(3, 3), 20u);
    for (int h = 2; h <= 7; ++h) {
        for (int w = 2; w <= 7; ++w) {
            const std::size_t expected = 4u * h * w - 3u * h - 3u * w + 2u;
            EXPECT_EQ(lattice_edge_count(h, w), expected);
            EXPECT_EQ(enumerate_pairs(h, w), expected);
            EXPECT_EQ(build_graph(full_map(h, w, 0.5f)).edge_count(), expected);
        }
    }
}

TEST(BuildGraph, UnitAffinitiesGiveUnitWeights) {
    const PixelGraph g = build_graph(full_map(4, 5, 1.f));
    for (const Edge& e : g.edges()) EXPECT_EQ(e.weight, 1.0);
}

TEST(BuildGraph, EdgeOrderAndSymmetrizedWeights) {
    std::mt19937_64 rng(2);
    const AffinityMap map = oracle::random_affinity(rng, 3, 4);
    const PixelGraph g = build_graph(map);
    // First pixel emits E, SE, S (SW is out of frame).
    ASSERT_GE(g.edge_count(), 3u);
    EXPECT_EQ(g.edge(0).v, 1u);
    EXPECT_EQ(g.edge(1).v, 5u);
    EXPECT_EQ(g.edge(2).v, 4u);
    EXPECT_EQ(g.edge(0).weight,
              (static_cast<double>(map.at(static_cast<int>(Dir::E), 0)) + map.at(static_cast<int>(Dir::W), 1)) / 2.0);
    for (const Edge& e : g.edges()) EXPECT_LT(e.u, e.v);
}

TEST(BuildGraph, MassesAndTotals) {
    std::mt19937_64 rng(12);
    const PixelGraph g = build_graph(oracle::random_affinity(rng, 6, 7));
    double edge_sum = 0.0;
    for (const Edge& e : g.edges()) edge_sum += e.weight;
    EXPECT_NEAR(g.w_total(), 2.0 * edge_sum, 1e-12 * g.w_total());
    double mass = 0.0;
    for (double m : g.masses()) mass += m;
    EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(BuildGraph, InvariantUnderMirroredChannelSwap) {
    std::mt19937_64 rng(13);
    const AffinityMap map = oracle::random_affinity(rng, 5, 5);
    // Move each directed value onto the neighbor's mirrored slot.
    AffinityMap swapped(5, 5);
    for (int r = 0; r < 5; ++r) {
        for (int c = 0; c < 5; ++c) {
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, 5, 5)) continue;
                swapped.at(opposite(d), nr * 5 + nc) = map.at(d, r * 5 + c);
            }
        }
    }
    const PixelGraph a = build_graph(map);
    const PixelGraph b = build_graph(swapped);
    ASSERT_EQ(a.edge_count(), b.edge_count());
    for (EdgeId e = 0; e < a.edge_count(); ++e) EXPECT_EQ(a.edge(e).weight, b.edge(e).weight);
}

TEST(BuildGraph, AllZeroAffinityIsError) {
    EXPECT_THROW(build_graph(AffinityMap(3, 3)), ArgumentError);
}

TEST(EntropyRate, EmptySelectionIsZero) {
    std::mt19937_64 rng(1);
    const PixelGraph g = build_graph(oracle::random_affinity(rng, 4, 4));
    EXPECT_EQ(entropy_rate(g, {}), 0.0);
}

TEST(EntropyRate, ThreeNodePathMatchesTransitionMatrix) {
    const PixelGraph g = PixelGraph::from_edges(3, {Edge{0, 1, 1.0}, Edge{1, 2, 1.0}});
    const std::vector<EdgeId> sel{0};
    // w = (1, 2, 1), w_T = 4. Node 0 moves to 1 surely; node 1 splits 1/2, 1/2.
    const double hand = -(2.0 / 4.0) * (2.0 * 0.5 * std::log(0.5));
    EXPECT_NEAR(entropy_rate(g, sel), hand, 1e-15);
    EXPECT_NEAR(entropy_rate(g, sel), oracle::dense_entropy_rate(g, sel), 1e-15);
}

TEST(EntropyRate, MatchesDenseOracleOnRandomGraphs) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const PixelGraph g = oracle::random_small_graph(rng);
        std::vector<EdgeId> sel;
        for (EdgeId e = 0; e < g.edge_count(); ++e) {
            if (rng() % 2) sel.push_back(e);
        }
        const double h = entropy_rate(g, sel);
        EXPECT_TRUE(std::isfinite(h));
        EXPECT_NEAR(h, oracle::dense_entropy_rate(g, sel), 1e-12);
    }
}

TEST(EntropyRate, ZeroWeightEdgeChangesNothing) {
    const PixelGraph g = PixelGraph::from_edges(3, {Edge{0, 1, 1.0}, Edge{1, 2, 0.0}, Edge{0, 2, 0.5}});
    const std::vector<EdgeId> a{0};
    const std::vector<EdgeId> b{0, 1};
    EXPECT_EQ(entropy_rate(g, a), entropy_rate(g, b));
}

TEST(EdgeGain, ClosedForms) {
    EXPECT_EQ(gain_formula(0.0, 0.3, 0.2), 0.0);
    EXPECT_NEAR(gain_formula(0.25, 0.25, 0.25), std::log(2.0), 1e-15);
    EXPECT_NEAR(gain_formula(0.5, 0.0, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(gain_formula(0.25, 0.25, 0.25), 0.693147, 1e-6);
}

TEST(EdgeGain, FiniteEverywhere) {
    for (double w : {0.0, 1e-300, 1e-12, 0.3, 1.0}) {
        for (double m : {0.0, 1e-300, 0.5, 2.0}) {
            EXPECT_TRUE(std::isfinite(gain_formula(w, m, 0.0)));
            EXPECT_TRUE(std::isfinite(gain_formula(w, m, m)));
        }
    }
}

TEST(CommitEdge, ZeroWeightLeavesMassesAlone) {
    PixelGraph g = PixelGraph::from_edges(3, {Edge{0, 1, 1.0}, Edge{1, 2, 0.0}});
    const std::vector<double> before(g.masses().begin(), g.masses().end());
    commit_edge(g, 1);
    EXPECT_EQ(std::vector<double>(g.masses().begin(), g.masses().end()), before);
}

TEST(CommitEdge, DoubleCommitThrows) {
    PixelGraph g = PixelGraph::from_edges(2, {Edge{0, 1, 1.0}});
    commit_edge(g, 0);
    EXPECT_THROW(commit_edge(g, 0), std::logic_error);
}

TEST(CommitEdge, TelescopingMassSum) {
    std::mt19937_64 rng(31);
    PixelGraph g = build_graph(oracle::random_affinity(rng, 4, 4));
    double norm_sum = 0.0;
    for (EdgeId e = 0; e < g.edge_count(); ++e) {
        norm_sum += g.normalized_weight(e);
        commit_edge(g, e);
    }
    double mass = 0.0;
    for (double m : g.masses()) mass += m;
    EXPECT_NEAR(mass, 1.0 + 2.0 * norm_sum, 1e-12);
    // Every edge committed: sum of w/w_T is exactly one half.
    EXPECT_NEAR(mass, 2.0, 1e-12);
}

// Incremental gains after arbitrary commits agree with masses rebuilt from scratch.
TEST(CommitEdge, IncrementalMatchesFromScratch) {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        PixelGraph g = oracle::random_small_graph(rng);
        std::vector<EdgeId> order(g.edge_count());
        std::iota(order.begin(), order.end(), 0u);
        std::shuffle(order.begin(), order.end(), rng);
        order.resize(rng() % (order.size() + 1));
        std::vector<EdgeId> done;
        for (EdgeId c : order) {
            commit_edge(g, c);
            done.push_back(c);
            const auto m = oracle::masses_from_scratch(g, done);
            for (EdgeId e = 0; e < g.edge_count(); ++e) {
                const Edge& edge = g.edge(e);
                const double expected = oracle::gain_expr(edge.weight / g.w_total(), m[edge.u], m[edge.v]);
                ASSERT_NEAR(edge_gain(g, e).gain, expected, 1e-9);
            }
        }
    }
}

}  // namespace
}  // namespace hers
