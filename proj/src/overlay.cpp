#include "hers/overlay.hpp"

#include <cmath>
#include <string>

#include "hers/error.hpp"
#include "hers/metrics.hpp"

namespace hers {

std::vector<std::uint8_t> boundary_overlay(const RgbImage& image, const LabelMap& labels,
                                           std::array<std::uint8_t, 3> color) {
    if (image.height() != labels.height() || image.width() != labels.width()) {
        throw ArgumentError("overlay: image and label map dimensions differ");
    }
    std::vector<std::uint8_t> rgb(3 * image.size());
    for (int r = 0; r < image.height(); ++r) {
        for (int c = 0; c < image.width(); ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * image.width() + c;
            const bool edge = is_boundary(labels, r, c);
            for (int ch = 0; ch < 3; ++ch) {
                rgb[3 * i + ch] = edge ? color[ch] : static_cast<std::uint8_t>(std::lround(image.pixel(i)[ch] * 255.f));
            }
        }
    }
    return rgb;
}

}  // namespace hers
