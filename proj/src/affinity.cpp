#include "hers/affinity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hers/error.hpp"

namespace hers {

namespace {

// Directions whose neighbor lies later in row-major order.
constexpr std::array<int, 4> kForward{static_cast<int>(Dir::E), static_cast<int>(Dir::SE), static_cast<int>(Dir::S),
                                      static_cast<int>(Dir::SW)};

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ArgumentError("sigma must be a positive finite number");
}

float pair_affinity(const RgbImage& image, std::size_t p, std::size_t q, double sigma) {
    return static_cast<float>(gaussian_similarity(rgb_distance(image.pixel(p), image.pixel(q)), sigma));
}

// Serial reference: one evaluation per undirected pair, written to both slots.
AffinityMap gaussian_affinity_serial(const RgbImage& image, double sigma) {
    const int h = image.height();
    const int w = image.width();
    AffinityMap map(h, w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            for (int d : kForward) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                const std::size_t q = static_cast<std::size_t>(nr) * w + nc;
                const float g = pair_affinity(image, p, q, sigma);
                map.at(d, p) = g;
                map.at(opposite(d), q) = g;
            }
        }
    }
    return map;
}

// Each pixel fills its own 8 slots; rows are independent.
AffinityMap gaussian_affinity_parallel(const RgbImage& image, double sigma) {
    const int h = image.height();
    const int w = image.width();
    AffinityMap map(h, w);
#pragma omp parallel for schedule(static)
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                map.at(d, p) = pair_affinity(image, p, static_cast<std::size_t>(nr) * w + nc, sigma);
            }
        }
    }
    return map;
}

double row_distance_sum(const RgbImage& image, int r, std::size_t& pairs) {
    const int h = image.height();
    const int w = image.width();
    double sum = 0.0;
    for (int c = 0; c < w; ++c) {
        const std::size_t p = static_cast<std::size_t>(r) * w + c;
        for (int d : kForward) {
            const int nr = r + kDirRow[d];
            const int nc = c + kDirCol[d];
            if (!in_frame(nr, nc, h, w)) continue;
            sum += rgb_distance(image.pixel(p), image.pixel(static_cast<std::size_t>(nr) * w + nc));
            ++pairs;
        }
    }
    return sum;
}

}  // namespace

double gaussian_similarity(double distance, double sigma) {
    return std::exp(-(distance * distance) / (2.0 * sigma * sigma));
}

double rgb_distance(std::span<const float, 3> a, std::span<const float, 3> b) {
    double sq = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
        sq += diff * diff;
    }
    return std::sqrt(sq);
}

AffinityMap gaussian_affinity(const RgbImage& image, GaussianParams params, Exec exec) {
    check_sigma(params.sigma);
    return exec == Exec::Serial ? gaussian_affinity_serial(image, params.sigma)
                                : gaussian_affinity_parallel(image, params.sigma);
}

GaussianParams auto_sigma(const RgbImage& image, Exec exec) {
    const int h = image.height();
    // Per-row partial sums folded in row order, so both paths agree bit-for-bit.
    std::vector<double> row_sum(h, 0.0);
    std::vector<std::size_t> row_pairs(h, 0);
    if (exec == Exec::Serial) {
        for (int r = 0; r < h; ++r) row_sum[r] = row_distance_sum(image, r, row_pairs[r]);
    } else {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < h; ++r) row_sum[r] = row_distance_sum(image, r, row_pairs[r]);
    }
    double sum = 0.0;
    std::size_t pairs = 0;
    for (int r = 0; r < h; ++r) {
        sum += row_sum[r];
        pairs += row_pairs[r];
    }
    const double mean = pairs ? sum / static_cast<double>(pairs) : 0.0;
    return GaussianParams{std::max(mean, kSigmaFloor)};
}

AffinityMap apply_edge_probs(const AffinityMap& map, const EdgeProbMap& edges, double epsilon, Exec exec) {
    if (map.height() != edges.height() || map.width() != edges.width()) {
        throw ArgumentError("edge-probability map is " + std::to_string(edges.height()) + "x" +
                            std::to_string(edges.width()) + " but affinity map is " + std::to_string(map.height()) +
                            "x" + std::to_string(map.width()));
    }
    if (!(epsilon > 0.0)) throw ArgumentError("epsilon must be positive");
    const int h = map.height();
    const int w = map.width();
    AffinityMap out(h, w);
    auto row = [&](int r) {
        for (int c = 0; c < w; ++c) {
            const std::size_t p = static_cast<std::size_t>(r) * w + c;
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                const std::size_t q = static_cast<std::size_t>(nr) * w + nc;
                const double divisor = epsilon + (static_cast<double>(edges[p]) + static_cast<double>(edges[q])) / 2.0;
                out.at(d, p) = static_cast<float>(std::clamp(static_cast<double>(map.at(d, p)) / divisor, 0.0, 1.0));
            }
        }
    };
    if (exec == Exec::Serial) {
        for (int r = 0; r < h; ++r) row(r);
    } else {
#pragma omp parallel for schedule(static)
        for (int r = 0; r < h; ++r) row(r);
    }
    return out;
}

}  // namespace hers
