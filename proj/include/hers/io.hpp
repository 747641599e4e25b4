#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "hers/image.hpp"

namespace hers {

namespace fs = std::filesystem;

/// Loads an 8-bit PNG or a binary PPM (P6); values are scaled to [0,1].
RgbImage load_image(const fs::path& path);

void save_png(const fs::path& path, int height, int width, const std::vector<std::uint8_t>& rgb);
void save_ppm(const fs::path& path, const RgbImage& image);

// AFF8: "AFF8", u32 H, u32 W, u32 reserved = 0, then 8*H*W little-endian
// float32 values, channel-major in (NW, N, NE, W, E, SW, S, SE) order.
AffinityMap read_affinity(const fs::path& path);
void write_affinity(const AffinityMap& map, const fs::path& path);

/// Channel permutation for foreign producers: output channel c takes
/// input channel `perm[c]`. Must be a bijection on {0..7}.
using ChannelPerm = std::array<int, kDirs>;
AffinityMap permute_channels(const AffinityMap& map, const ChannelPerm& perm);

// EDG1: "EDG1", u32 H, u32 W, then H*W little-endian float32 row-major.
EdgeProbMap read_edge_probs(const fs::path& path);
void write_edge_probs(const EdgeProbMap& map, const fs::path& path);

enum class LabelFormat { Pgm, Csv };

/// Reads a 16-bit P5 PGM (maxval 65535) or CSV; the format is sniffed from
/// the content. Labels are re-indexed densely.
LabelMap read_labels(const fs::path& path);
void write_labels(const LabelMap& labels, const fs::path& path, LabelFormat format);

/// Picks the format from the extension (".csv" -> CSV, otherwise PGM).
void write_labels(const LabelMap& labels, const fs::path& path);

}  // namespace hers
