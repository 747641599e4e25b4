#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace hers {

/// The 8 neighbor directions in storage order.
enum class Dir : std::uint8_t { NW = 0, N, NE, W, E, SW, S, SE };

inline constexpr int kDirs = 8;
inline constexpr std::array<int, kDirs> kDirRow{-1, -1, -1, 0, 0, 1, 1, 1};
inline constexpr std::array<int, kDirs> kDirCol{-1, 0, 1, -1, 1, -1, 0, 1};

/// Channel of the neighbor pointing back at us (E <-> W, SE <-> NW, ...).
constexpr int opposite(int dir) { return kDirs - 1 - dir; }

constexpr bool in_frame(int r, int c, int height, int width) {
    return r >= 0 && c >= 0 && r < height && c < width;
}

/// Row-major RGB image with channel values in [0,1].
class RgbImage {
public:
    RgbImage() = default;
    RgbImage(int height, int width);
    RgbImage(int height, int width, std::vector<float> rgb);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return static_cast<std::size_t>(height_) * width_; }

    std::span<const float, 3> pixel(std::size_t idx) const {
        return std::span<const float, 3>(data_.data() + 3 * idx, 3);
    }
    std::span<float, 3> pixel(std::size_t idx) {
        return std::span<float, 3>(data_.data() + 3 * idx, 3);
    }
    const std::vector<float>& data() const { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// 8 directional affinity planes, channel-major: value(c, idx) is the affinity
/// of pixel idx toward its neighbor in direction c. Out-of-frame slots are 0.
class AffinityMap {
public:
    AffinityMap() = default;
    AffinityMap(int height, int width);
    AffinityMap(int height, int width, std::vector<float> planes);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return static_cast<std::size_t>(height_) * width_; }

    float at(int dir, std::size_t idx) const { return data_[dir * size() + idx]; }
    float& at(int dir, std::size_t idx) { return data_[dir * size() + idx]; }

    std::span<const float> plane(int dir) const {
        return std::span<const float>(data_).subspan(dir * size(), size());
    }
    const std::vector<float>& data() const { return data_; }

    /// Forces every slot whose neighbor falls outside the frame to 0.
    void zero_out_of_frame();

    friend bool operator==(const AffinityMap&, const AffinityMap&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Per-pixel boundary probability in [0,1].
class EdgeProbMap {
public:
    EdgeProbMap() = default;
    EdgeProbMap(int height, int width, std::vector<float> probs);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return data_.size(); }
    float operator[](std::size_t idx) const { return data_[idx]; }
    const std::vector<float>& data() const { return data_; }

    friend bool operator==(const EdgeProbMap&, const EdgeProbMap&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<float> data_;
};

/// Dense labeling: labels are exactly {0, ..., k-1}.
class LabelMap {
public:
    LabelMap() = default;

    /// Re-indexes `raw` densely in first-occurrence row-major order.
    static LabelMap densify(int height, int width, std::span<const std::int64_t> raw);
    static LabelMap densify(int height, int width, std::span<const std::uint32_t> raw);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t size() const { return labels_.size(); }
    std::uint32_t k() const { return k_; }
    std::uint32_t operator[](std::size_t idx) const { return labels_[idx]; }
    std::uint32_t at(int r, int c) const { return labels_[static_cast<std::size_t>(r) * width_ + c]; }
    const std::vector<std::uint32_t>& labels() const { return labels_; }

    friend bool operator==(const LabelMap&, const LabelMap&) = default;

private:
    LabelMap(int height, int width, std::vector<std::uint32_t> labels, std::uint32_t k)
        : height_(height), width_(width), labels_(std::move(labels)), k_(k) {}

    int height_ = 0;
    int width_ = 0;
    std::vector<std::uint32_t> labels_;
    std::uint32_t k_ = 0;
};

/// True when every label's pixel set is 8-connected.
bool labels_connected(const LabelMap& labels);

}  // namespace hers
