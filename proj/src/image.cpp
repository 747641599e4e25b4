#include "hers/image.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <unordered_map>

#include "hers/error.hpp"

namespace hers {

namespace {

void check_shape(int height, int width) {
    if (height <= 0 || width <= 0) {
        throw ArgumentError("image dimensions must be positive, got " + std::to_string(height) + "x" +
                            std::to_string(width));
    }
}

template <typename T>
LabelMap densify_impl(int height, int width, std::span<const T> raw, auto make) {
    check_shape(height, width);
    if (raw.size() != static_cast<std::size_t>(height) * width) {
        throw ArgumentError("label count does not match dimensions");
    }
    std::unordered_map<T, std::uint32_t> remap;
    std::vector<std::uint32_t> labels(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto [it, inserted] = remap.try_emplace(raw[i], static_cast<std::uint32_t>(remap.size()));
        labels[i] = it->second;
    }
    return make(std::move(labels), static_cast<std::uint32_t>(remap.size()));
}

std::size_t checked_size(int height, int width) {
    check_shape(height, width);
    return static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
}

}  // namespace

RgbImage::RgbImage(int height, int width)
    : RgbImage(height, width, std::vector<float>(3 * checked_size(height, width), 0.f)) {}

RgbImage::RgbImage(int height, int width, std::vector<float> rgb)
    : height_(height), width_(width), data_(std::move(rgb)) {
    check_shape(height, width);
    if (data_.size() != 3 * size()) throw ArgumentError("RGB buffer size does not match dimensions");
    for (float v : data_) {
        if (!(v >= 0.f && v <= 1.f)) throw ArgumentError("RGB values must lie in [0,1]");
    }
}

AffinityMap::AffinityMap(int height, int width)
    : AffinityMap(height, width, std::vector<float>(kDirs * checked_size(height, width), 0.f)) {}

AffinityMap::AffinityMap(int height, int width, std::vector<float> planes)
    : height_(height), width_(width), data_(std::move(planes)) {
    check_shape(height, width);
    if (data_.size() != kDirs * size()) throw ArgumentError("affinity buffer size does not match dimensions");
    for (float v : data_) {
        if (!(v >= 0.f && v <= 1.f)) throw ArgumentError("affinity values must lie in [0,1]");
    }
}

void AffinityMap::zero_out_of_frame() {
    for (int d = 0; d < kDirs; ++d) {
        for (int r = 0; r < height_; ++r) {
            for (int c = 0; c < width_; ++c) {
                if (!in_frame(r + kDirRow[d], c + kDirCol[d], height_, width_)) {
                    at(d, static_cast<std::size_t>(r) * width_ + c) = 0.f;
                }
            }
        }
    }
}

EdgeProbMap::EdgeProbMap(int height, int width, std::vector<float> probs)
    : height_(height), width_(width), data_(std::move(probs)) {
    check_shape(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width) {
        throw ArgumentError("edge-probability buffer size does not match dimensions");
    }
    for (float v : data_) {
        if (!(v >= 0.f && v <= 1.f)) throw ArgumentError("edge probabilities must lie in [0,1]");
    }
}

LabelMap LabelMap::densify(int height, int width, std::span<const std::int64_t> raw) {
    return densify_impl<std::int64_t>(height, width, raw, [&](std::vector<std::uint32_t> l, std::uint32_t k) {
        return LabelMap(height, width, std::move(l), k);
    });
}

LabelMap LabelMap::densify(int height, int width, std::span<const std::uint32_t> raw) {
    const std::size_t n = checked_size(height, width);
    if (raw.size() == n && !raw.empty() && *std::max_element(raw.begin(), raw.end()) < 4 * n) {
        // Small id range: table remap instead of hashing.
        constexpr std::uint32_t kUnset = ~0u;
        std::vector<std::uint32_t> remap(*std::max_element(raw.begin(), raw.end()) + 1, kUnset);
        std::vector<std::uint32_t> labels(n);
        std::uint32_t k = 0;
        for (std::size_t i = 0; i < n; ++i) {
            std::uint32_t& slot = remap[raw[i]];
            if (slot == kUnset) slot = k++;
            labels[i] = slot;
        }
        return LabelMap(height, width, std::move(labels), k);
    }
    return densify_impl<std::uint32_t>(height, width, raw, [&](std::vector<std::uint32_t> l, std::uint32_t k) {
        return LabelMap(height, width, std::move(l), k);
    });
}

bool labels_connected(const LabelMap& labels) {
    const int h = labels.height();
    const int w = labels.width();
    std::vector<std::uint8_t> seen_label(labels.k(), 0);
    std::vector<std::uint8_t> visited(labels.size(), 0);
    std::queue<std::size_t> queue;
    for (std::size_t start = 0; start < labels.size(); ++start) {
        if (visited[start]) continue;
        const std::uint32_t label = labels[start];
        // A second flood seed for the same label means it is split.
        if (seen_label[label]) return false;
        seen_label[label] = 1;
        visited[start] = 1;
        queue.push(start);
        while (!queue.empty()) {
            const std::size_t idx = queue.front();
            queue.pop();
            const int r = static_cast<int>(idx / w);
            const int c = static_cast<int>(idx % w);
            for (int d = 0; d < kDirs; ++d) {
                const int nr = r + kDirRow[d];
                const int nc = c + kDirCol[d];
                if (!in_frame(nr, nc, h, w)) continue;
                const std::size_t n = static_cast<std::size_t>(nr) * w + nc;
                if (!visited[n] && labels[n] == label) {
                    visited[n] = 1;
                    queue.push(n);
                }
            }
        }
    }
    return true;
}

}  // namespace hers
