#pragma once

#include <cstdint>
#include <vector>

#include "hers/image.hpp"

namespace hers {

/// 8-bit RGB rendering of `image` with label boundaries painted in `color`.
std::vector<std::uint8_t> boundary_overlay(const RgbImage& image, const LabelMap& labels,
                                           std::array<std::uint8_t, 3> color = {255, 0, 0});

}  // namespace hers
