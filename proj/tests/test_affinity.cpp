#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hers/affinity.hpp"
#include "hers/error.hpp"
#include "oracles.hpp"

namespace hers {
namespace {

constexpr int kE = static_cast<int>(Dir::E);
constexpr int kW = static_cast<int>(Dir::W);

RgbImage two_pixels(std::array<float, 3> a, std::array<float, 3> b) {
    return RgbImage(1, 2, {a[0], a[1], a[2], b[0], b[1], b[2]});
}

TEST(GaussianAffinity, IdenticalPixelsGiveOne) {
    for (double sigma : {1e-3, 0.1, 5.0}) {
        const AffinityMap map = gaussian_affinity(two_pixels({0.3f, 0.6f, 0.1f}, {0.3f, 0.6f, 0.1f}), {sigma});
        EXPECT_EQ(map.at(kE, 0), 1.0f);
        EXPECT_EQ(map.at(kW, 1), 1.0f);
    }
}

TEST(GaussianAffinity, ClosedFormValues) {
    EXPECT_NEAR(gaussian_similarity(0.1, 0.1), 0.606531, 1e-6);
    // d = 0.1 along one channel; 0.25 and 0.35 are exactly 0.1 apart in float.
    const AffinityMap map = gaussian_affinity(two_pixels({0.25f, 0.f, 0.f}, {0.35f, 0.f, 0.f}), {0.1});
    EXPECT_NEAR(map.at(kE, 0), std::exp(-0.5), 1e-6);

    const AffinityMap bw = gaussian_affinity(two_pixels({0.f, 0.f, 0.f}, {1.f, 1.f, 1.f}), {0.1});
    EXPECT_NEAR(bw.at(kE, 0), std::exp(-150.0), 1e-30);
}

TEST(GaussianAffinity, MirrorSymmetricAndInRange) {
    std::mt19937_64 rng(21);
    const RgbImage img = oracle::random_image(rng, 9, 11);
    const AffinityMap map = gaussian_affinity(img, auto_sigma(img));
    for (int r = 0; r < img.height(); ++r) {
        for (int c = 0; c < img.width(); ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * img.width() + c;
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, img.height(), img.width())) {
                    EXPECT_EQ(map.at(d, p), 0.0f);
                    continue;
                }
                const std::size_t q = static_cast<std::size_t>(nr) * img.width() + nc;
                EXPECT_EQ(map.at(d, p), map.at(opposite(d), q));
                EXPECT_GT(map.at(d, p), 0.0f);
                EXPECT_LE(map.at(d, p), 1.0f);
            }
        }
    }
}

TEST(GaussianAffinity, MonotoneDecreasingInDistance) {
    double previous = 2.0;
    for (double d = 0.0; d < 1.8; d += 0.05) {
        const double g = gaussian_similarity(d, 0.3);
        EXPECT_LT(g, previous);
        previous = g;
    }
}

TEST(GaussianAffinity, RejectsNonPositiveSigma) {
    const RgbImage img(2, 2);
    EXPECT_THROW(gaussian_affinity(img, {0.0}), ArgumentError);
    EXPECT_THROW(gaussian_affinity(img, {-1.0}), ArgumentError);
}

TEST(AutoSigma, ConstantImageHitsFloor) {
    EXPECT_EQ(auto_sigma(RgbImage(4, 4)).sigma, kSigmaFloor);
}

TEST(AutoSigma, SinglePair) {
    EXPECT_DOUBLE_EQ(auto_sigma(two_pixels({0, 0, 0}, {1, 1, 1})).sigma, std::sqrt(3.0));
}

TEST(AutoSigma, CheckerboardMatchesPairEnumeration) {
    const RgbImage img(2, 2, {0, 0, 0, 1, 1, 1, 1, 1, 1, 0, 0, 0});
    // Enumerate the 6 undirected 8-neighbor pairs of the 2x2 lattice.
    const int pairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    double sum = 0.0;
    for (const auto& pr : pairs) {
        double sq = 0.0;
        for (int ch = 0; ch < 3; ++ch) {
            const double diff = img.pixel(pr[0])[ch] - img.pixel(pr[1])[ch];
            sq += diff * diff;
        }
        sum += std::sqrt(sq);
    }
    EXPECT_NEAR(auto_sigma(img).sigma, sum / 6.0, 1e-15);
    EXPECT_NEAR(auto_sigma(img).sigma, 4.0 * std::sqrt(3.0) / 6.0, 1e-15);
}

AffinityMap constant_map(int h, int w, float value) {
    AffinityMap map(h, w, std::vector<float>(static_cast<std::size_t>(kDirs) * h * w, value));
    map.zero_out_of_frame();
    return map;
}

TEST(ApplyEdgeProbs, ZeroProbsWithUnitEpsilonIsIdentity) {
    std::mt19937_64 rng(4);
    const AffinityMap map = oracle::random_affinity(rng, 5, 6);
    const EdgeProbMap zeros(5, 6, std::vector<float>(30, 0.f));
    EXPECT_EQ(apply_edge_probs(map, zeros, 1.0), map);
}

TEST(ApplyEdgeProbs, ClosedFormAndClamp) {
    const EdgeProbMap ones(1, 2, {1.f, 1.f});
    EXPECT_NEAR(apply_edge_probs(constant_map(1, 2, 0.5f), ones, 0.001).at(kE, 0), 0.5 / 1.001, 1e-7);

    const EdgeProbMap low(1, 2, {0.1f, 0.1f});
    EXPECT_EQ(apply_edge_probs(constant_map(1, 2, 0.9f), low, 0.001).at(kE, 0), 1.0f);
}

TEST(ApplyEdgeProbs, NeverIncreasesWhenProbabilitiesHigh) {
    std::mt19937_64 rng(8);
    const AffinityMap map = oracle::random_affinity(rng, 6, 6);
    const double eps = 1e-3;
    std::uniform_real_distribution<float> high(static_cast<float>(1.0 - eps), 1.0f);
    std::vector<float> probs(36);
    for (auto& p : probs) p = high(rng);
    const AffinityMap out = apply_edge_probs(map, EdgeProbMap(6, 6, probs), eps);
    for (std::size_t i = 0; i < map.data().size(); ++i) {
        EXPECT_LE(out.data()[i], map.data()[i]);
        EXPECT_GE(out.data()[i], 0.0f);
    }
}

TEST(ApplyEdgeProbs, DimensionMismatch) {
    EXPECT_THROW(apply_edge_probs(AffinityMap(2, 2), EdgeProbMap(2, 3, std::vector<float>(6, 0.f))), ArgumentError);
}

}  // namespace
}  // namespace hers
