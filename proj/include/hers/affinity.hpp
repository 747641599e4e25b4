#pragma once

#include "hers/exec.hpp"
#include "hers/image.hpp"

namespace hers {

struct GaussianParams {
    double sigma = 0.1;  // bandwidth in normalized-RGB distance units
};

inline constexpr double kSigmaFloor = 1e-4;
inline constexpr double kDefaultEdgeEpsilon = 1e-3;

/// g = exp(-d^2 / (2 sigma^2)), d the Euclidean distance of the RGB vectors.
double gaussian_similarity(double distance, double sigma);

/// Euclidean distance between two RGB pixels.
double rgb_distance(std::span<const float, 3> a, std::span<const float, 3> b);

AffinityMap gaussian_affinity(const RgbImage& image, GaussianParams params, Exec exec = Exec::Parallel);

/// sigma = max(mean distance over all in-frame 8-neighbor pairs, 1e-4).
GaussianParams auto_sigma(const RgbImage& image, Exec exec = Exec::Parallel);

/// a -> clamp(a / (epsilon + (h_p + h_q) / 2), 0, 1) for each directed slot.
AffinityMap apply_edge_probs(const AffinityMap& map, const EdgeProbMap& edges,
                             double epsilon = kDefaultEdgeEpsilon, Exec exec = Exec::Parallel);

}  // namespace hers
