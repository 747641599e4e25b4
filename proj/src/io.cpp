#include "hers/io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "hers/error.hpp"

namespace hers {

namespace {

// Largest dimension accepted from binary headers; keeps H*W*8*4 well inside size_t.
constexpr std::uint32_t kMaxDim = 1u << 16;

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IoError("read failed: " + path.string());
    return bytes;
}

void write_file(const fs::path& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

/// Little-endian cursor over a byte buffer.
class Reader {
public:
    Reader(std::string_view bytes, std::string what) : bytes_(bytes), what_(std::move(what)) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }
    float f32() { return std::bit_cast<float>(u32()); }

    void expect_magic(std::string_view magic) {
        need(magic.size());
        if (bytes_.substr(pos_, magic.size()) != magic) throw FormatError(what_ + ": bad magic");
        pos_ += magic.size();
    }
    void need(std::size_t n) const {
        if (bytes_.size() - pos_ < n) throw FormatError(what_ + ": truncated payload");
    }

private:
    std::string_view bytes_;
    std::string what_;
    std::size_t pos_ = 0;
};

std::pair<int, int> read_dims(Reader& reader, const std::string& what) {
    const std::uint32_t h = reader.u32();
    const std::uint32_t w = reader.u32();
    if (h == 0 || w == 0) throw FormatError(what + ": zero-sized image");
    if (h > kMaxDim || w > kMaxDim) throw FormatError(what + ": dimension overflow");
    return {static_cast<int>(h), static_cast<int>(w)};
}

/// Whitespace/comment-separated header tokens of a netpbm file.
class PnmHeader {
public:
    explicit PnmHeader(std::string_view bytes) : bytes_(bytes) {}

    std::string token() {
        skip_space();
        std::string tok;
        while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) tok.push_back(bytes_[pos_++]);
        if (tok.empty()) throw FormatError("truncated netpbm header");
        return tok;
    }
    long number() {
        const std::string tok = token();
        long v = 0;
        auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || end != tok.data() + tok.size() || v <= 0) {
            throw FormatError("bad netpbm header field '" + tok + "'");
        }
        return v;
    }
    /// Offset of the raster: one whitespace byte after the last header token.
    std::size_t raster_start() {
        if (pos_ >= bytes_.size()) throw FormatError("truncated netpbm header");
        return pos_ + 1;
    }

private:
    void skip_space() {
        while (pos_ < bytes_.size()) {
            if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

RgbImage decode_ppm(const std::string& bytes, const fs::path& path) {
    PnmHeader header(bytes);
    if (header.token() != "P6") throw FormatError(path.string() + ": not a binary PPM");
    const long w = header.number();
    const long h = header.number();
    const long maxval = header.number();
    if (w > static_cast<long>(kMaxDim) || h > static_cast<long>(kMaxDim)) throw FormatError("PPM dimension overflow");
    if (maxval > 255) throw FormatError(path.string() + ": only 8-bit PPM is supported");
    const std::size_t start = header.raster_start();
    const std::size_t count = 3 * static_cast<std::size_t>(w) * h;
    if (bytes.size() < start + count) throw FormatError(path.string() + ": truncated PPM raster");
    std::vector<float> rgb(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto byte = static_cast<unsigned char>(bytes[start + i]);
        if (byte > maxval) throw FormatError(path.string() + ": sample exceeds maxval");
        rgb[i] = static_cast<float>(byte) / static_cast<float>(maxval);
    }
    return RgbImage(static_cast<int>(h), static_cast<int>(w), std::move(rgb));
}

RgbImage decode_png(const std::string& bytes, const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw FormatError(path.string() + ": " + image.message);
    }
    image.format = PNG_FORMAT_RGB;
    if (image.width == 0 || image.height == 0) {
        png_image_free(&image);
        throw FormatError(path.string() + ": zero-sized image");
    }
    if (image.width > kMaxDim || image.height > kMaxDim) {
        png_image_free(&image);
        throw FormatError(path.string() + ": dimension overflow");
    }
    std::vector<std::uint8_t> raster(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, raster.data(), 0, nullptr)) {
        throw FormatError(path.string() + ": " + image.message);
    }
    std::vector<float> rgb(raster.size());
    std::transform(raster.begin(), raster.end(), rgb.begin(), [](std::uint8_t b) { return static_cast<float>(b) / 255.f; });
    return RgbImage(static_cast<int>(image.height), static_cast<int>(image.width), std::move(rgb));
}

std::int64_t parse_int(std::string_view field, std::size_t line) {
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
    while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
    std::int64_t v = 0;
    auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size()) {
        throw FormatError("CSV line " + std::to_string(line) + ": bad integer '" + std::string(field) + "'");
    }
    return v;
}

LabelMap decode_csv(const std::string& bytes) {
    std::vector<std::int64_t> values;
    int width = -1;
    int height = 0;
    std::istringstream in(bytes);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        int fields = 0;
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            values.push_back(parse_int(rest.substr(0, comma), line_no));
            ++fields;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (width < 0) width = fields;
        if (fields != width) throw FormatError("ragged CSV row at line " + std::to_string(line_no));
        ++height;
    }
    if (height == 0) throw FormatError("empty CSV label map");
    return LabelMap::densify(height, width, values);
}

LabelMap decode_pgm(const std::string& bytes, const fs::path& path) {
    PnmHeader header(bytes);
    if (header.token() != "P5") throw FormatError(path.string() + ": not a binary PGM");
    const long w = header.number();
    const long h = header.number();
    const long maxval = header.number();
    if (maxval != 65535) throw FormatError(path.string() + ": label PGM must have maxval 65535");
    if (w > static_cast<long>(kMaxDim) || h > static_cast<long>(kMaxDim)) throw FormatError("PGM dimension overflow");
    const std::size_t start = header.raster_start();
    const std::size_t count = static_cast<std::size_t>(w) * h;
    if (bytes.size() < start + 2 * count) throw FormatError(path.string() + ": truncated PGM raster");
    std::vector<std::uint32_t> raw(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto hi = static_cast<unsigned char>(bytes[start + 2 * i]);
        const auto lo = static_cast<unsigned char>(bytes[start + 2 * i + 1]);
        raw[i] = (static_cast<std::uint32_t>(hi) << 8) | lo;
    }
    return LabelMap::densify(static_cast<int>(h), static_cast<int>(w), raw);
}

}  // namespace

RgbImage load_image(const fs::path& path) {
    const std::string bytes = read_file(path);
    if (bytes.empty()) throw FormatError(path.string() + ": empty file");
    static constexpr std::string_view kPngSig("\x89PNG", 4);
    if (std::string_view(bytes).starts_with(kPngSig)) return decode_png(bytes, path);
    if (std::string_view(bytes).starts_with("P6")) return decode_ppm(bytes, path);
    throw FormatError(path.string() + ": unsupported image format (expected PNG or P6 PPM)");
}

void save_png(const fs::path& path, int height, int width, const std::vector<std::uint8_t>& rgb) {
    if (rgb.size() != 3ull * height * width) throw ArgumentError("PNG raster size mismatch");
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(width);
    image.height = static_cast<png_uint_32>(height);
    image.format = PNG_FORMAT_RGB;
    if (!png_image_write_to_file(&image, path.c_str(), 0, rgb.data(), 0, nullptr)) {
        throw IoError(path.string() + ": " + image.message);
    }
}

void save_ppm(const fs::path& path, const RgbImage& image) {
    std::string bytes = "P6\n" + std::to_string(image.width()) + " " + std::to_string(image.height()) + "\n255\n";
    for (float v : image.data()) bytes.push_back(static_cast<char>(static_cast<std::uint8_t>(std::lround(v * 255.f))));
    write_file(path, bytes);
}

AffinityMap read_affinity(const fs::path& path) {
    const std::string bytes = read_file(path);
    Reader reader(bytes, path.string());
    reader.expect_magic("AFF8");
    const auto [h, w] = read_dims(reader, path.string());
    reader.u32();  // reserved
    const std::size_t count = kDirs * static_cast<std::size_t>(h) * w;
    reader.need(4 * count);
    std::vector<float> planes(count);
    for (auto& v : planes) v = reader.f32();
    // Out-of-frame slots may hold padding garbage; they are repaired, not rejected.
    const std::size_t n = static_cast<std::size_t>(h) * w;
    for (int d = 0; d < kDirs; ++d) {
        for (std::size_t i = 0; i < n; ++i) {
            const int r = static_cast<int>(i / w);
            const int c = static_cast<int>(i % w);
            float& v = planes[d * n + i];
            if (!in_frame(r + kDirRow[d], c + kDirCol[d], h, w)) {
                v = 0.f;
            } else if (!(v >= 0.f && v <= 1.f)) {
                throw FormatError(path.string() + ": affinity value outside [0,1]");
            }
        }
    }
    return AffinityMap(h, w, std::move(planes));
}

void write_affinity(const AffinityMap& map, const fs::path& path) {
    std::string bytes = "AFF8";
    bytes.reserve(16 + 4 * map.data().size());
    put_u32(bytes, static_cast<std::uint32_t>(map.height()));
    put_u32(bytes, static_cast<std::uint32_t>(map.width()));
    put_u32(bytes, 0);
    for (float v : map.data()) put_f32(bytes, v);
    write_file(path, bytes);
}

AffinityMap permute_channels(const AffinityMap& map, const ChannelPerm& perm) {
    std::array<bool, kDirs> seen{};
    for (int p : perm) {
        if (p < 0 || p >= kDirs || seen[p]) throw ArgumentError("channel permutation must be a bijection on 0..7");
        seen[p] = true;
    }
    AffinityMap out(map.height(), map.width());
    for (int c = 0; c < kDirs; ++c) {
        for (std::size_t i = 0; i < map.size(); ++i) out.at(c, i) = map.at(perm[c], i);
    }
    out.zero_out_of_frame();
    return out;
}

EdgeProbMap read_edge_probs(const fs::path& path) {
    const std::string bytes = read_file(path);
    Reader reader(bytes, path.string());
    reader.expect_magic("EDG1");
    const auto [h, w] = read_dims(reader, path.string());
    const std::size_t count = static_cast<std::size_t>(h) * w;
    reader.need(4 * count);
    std::vector<float> probs(count);
    for (auto& v : probs) {
        const float x = reader.f32();
        if (!(x >= 0.f && x <= 1.f)) throw FormatError(path.string() + ": edge probability outside [0,1]");
        v = x;
    }
    return EdgeProbMap(h, w, std::move(probs));
}

void write_edge_probs(const EdgeProbMap& map, const fs::path& path) {
    std::string bytes = "EDG1";
    put_u32(bytes, static_cast<std::uint32_t>(map.height()));
    put_u32(bytes, static_cast<std::uint32_t>(map.width()));
    for (float v : map.data()) put_f32(bytes, v);
    write_file(path, bytes);
}

LabelMap read_labels(const fs::path& path) {
    const std::string bytes = read_file(path);
    if (std::string_view(bytes).starts_with("P5")) return decode_pgm(bytes, path);
    if (bytes.size() >= 2 && bytes[0] == 'P' && std::isdigit(static_cast<unsigned char>(bytes[1]))) {
        throw FormatError(path.string() + ": only binary 16-bit PGM (P5) label maps are supported");
    }
    return decode_csv(bytes);
}

void write_labels(const LabelMap& labels, const fs::path& path, LabelFormat format) {
    std::string bytes;
    if (format == LabelFormat::Pgm) {
        if (labels.k() > 65535) throw ArgumentError("PGM label output supports at most 65535 labels");
        bytes = "P5\n" + std::to_string(labels.width()) + " " + std::to_string(labels.height()) + "\n65535\n";
        bytes.reserve(bytes.size() + 2 * labels.size());
        for (std::uint32_t l : labels.labels()) {
            bytes.push_back(static_cast<char>((l >> 8) & 0xffu));
            bytes.push_back(static_cast<char>(l & 0xffu));
        }
    } else {
        for (int r = 0; r < labels.height(); ++r) {
            for (int c = 0; c < labels.width(); ++c) {
                if (c) bytes.push_back(',');
                bytes += std::to_string(labels.at(r, c));
            }
            bytes.push_back('\n');
        }
    }
    write_file(path, bytes);
}

void write_labels(const LabelMap& labels, const fs::path& path) {
    write_labels(labels, path, path.extension() == ".csv" ? LabelFormat::Csv : LabelFormat::Pgm);
}

}  // namespace hers
