#include <gtest/gtest.h>

#include <random>

#include "hers/error.hpp"
#include "hers/hierarchy.hpp"
#include "hers/lazy_greedy.hpp"
#include "oracles.hpp"

namespace hers {
namespace {

TEST(LazyGreedy, IdentityAtFullCount) {
    std::mt19937_64 rng(1);
    const PixelGraph g = build_graph(oracle::random_affinity(rng, 3, 5));
    const GreedyResult r = lazy_greedy_segment(g, 15);
    EXPECT_TRUE(r.selected.empty());
    for (std::uint32_t i = 0; i < 15; ++i) EXPECT_EQ(r.labels[i], i);
}

TEST(LazyGreedy, SixNodeExampleNeedsFourAdditions) {
    const GreedyResult r = lazy_greedy_segment(oracle::six_node_example(), 2);
    EXPECT_EQ(r.selected.size(), 4u);
    EXPECT_EQ(r.labels.labels(), (std::vector<std::uint32_t>{0, 0, 0, 1, 1, 1}));
    // After one addition only two nodes are joined.
    const GreedyResult first = lazy_greedy_segment(oracle::six_node_example(), 5);
    EXPECT_EQ(first.labels.k(), 5u);
}

TEST(LazyGreedy, SingleComponentMatchesHers) {
    std::mt19937_64 rng(2);
    const PixelGraph g = build_graph(oracle::random_affinity(rng, 6, 6));
    EXPECT_EQ(lazy_greedy_segment(g, 1).labels, extract(build_hierarchy(g), 1));
}

TEST(LazyGreedy, MatchesEagerGreedy) {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 200; ++trial) {
        const PixelGraph g = oracle::random_small_graph(rng);
        for (std::uint32_t k = 1; k <= g.node_count(); ++k) {
            ASSERT_EQ(lazy_greedy_segment(g, k).selected, oracle::eager_greedy(g, k)) << "trial " << trial << " k " << k;
        }
    }
}

TEST(LazyGreedy, ConnectedDenseLabels) {
    std::mt19937_64 rng(3);
    const PixelGraph g = build_graph(oracle::random_affinity(rng, 8, 9));
    for (std::uint32_t k : {1u, 2u, 10u, 40u, 72u}) {
        const LabelMap seg = lazy_greedy_segment(g, k).labels;
        EXPECT_EQ(seg.k(), k);
        EXPECT_TRUE(labels_connected(seg));
    }
}

TEST(LazyGreedy, Errors) {
    const PixelGraph g = PixelGraph::from_edges(4, {Edge{0, 1, 1.0}, Edge{2, 3, 1.0}});
    EXPECT_THROW(lazy_greedy_segment(g, 0), ArgumentError);
    EXPECT_THROW(lazy_greedy_segment(g, 5), ArgumentError);
    EXPECT_THROW(lazy_greedy_segment(g, 1), ArgumentError);
    EXPECT_EQ(lazy_greedy_segment(g, 2).labels.k(), 2u);
}

}  // namespace
}  // namespace hers
