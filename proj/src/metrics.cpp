#include "hers/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <unordered_map>

#include "hers/error.hpp"

namespace hers {

namespace {

void check_dims(int h1, int w1, int h2, int w2, const char* what) {
    if (h1 != h2 || w1 != w2) {
        throw ArgumentError(std::string(what) + ": dimension mismatch " + std::to_string(h1) + "x" + std::to_string(w1) +
                            " vs " + std::to_string(h2) + "x" + std::to_string(w2));
    }
}

}  // namespace

double asa(const LabelMap& gt, const LabelMap& seg) {
    check_dims(gt.height(), gt.width(), seg.height(), seg.width(), "asa");
    std::unordered_map<std::uint64_t, std::uint64_t> overlap;
    overlap.reserve(seg.k() * 2);
    for (std::size_t i = 0; i < seg.size(); ++i) {
        ++overlap[(static_cast<std::uint64_t>(seg[i]) << 32) | gt[i]];
    }
    std::vector<std::uint64_t> best(seg.k(), 0);
    for (const auto& [key, count] : overlap) {
        auto& b = best[key >> 32];
        b = std::max(b, count);
    }
    std::uint64_t covered = 0;
    for (std::uint64_t b : best) covered += b;
    return static_cast<double>(covered) / static_cast<double>(seg.size());
}

bool is_boundary(const LabelMap& labels, int r, int c) {
    const std::uint32_t l = labels.at(r, c);
    return (c + 1 < labels.width() && labels.at(r, c + 1) != l) || (r + 1 < labels.height() && labels.at(r + 1, c) != l);
}

double boundary_recall(const LabelMap& gt, const LabelMap& seg, int tolerance) {
    check_dims(gt.height(), gt.width(), seg.height(), seg.width(), "boundary_recall");
    if (tolerance < 0) throw ArgumentError("boundary tolerance must be >= 0");
    const int h = gt.height();
    const int w = gt.width();
    // Summed-area table of segmentation boundary pixels, (h+1) x (w+1).
    std::vector<std::uint32_t> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0);
    auto at = [&](int r, int c) -> std::uint32_t& { return sat[static_cast<std::size_t>(r) * (w + 1) + c]; };
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            at(r + 1, c + 1) = at(r, c + 1) + at(r + 1, c) - at(r, c) + (is_boundary(seg, r, c) ? 1u : 0u);
        }
    }
    std::uint64_t tp = 0;
    std::uint64_t total = 0;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (!is_boundary(gt, r, c)) continue;
            ++total;
            const int r0 = std::max(0, r - tolerance);
            const int c0 = std::max(0, c - tolerance);
            const int r1 = std::min(h, r + tolerance + 1);
            const int c1 = std::min(w, c + tolerance + 1);
            if (at(r1, c1) + at(r0, c0) - at(r0, c1) - at(r1, c0) > 0) ++tp;
        }
    }
    return total == 0 ? 1.0 : static_cast<double>(tp) / static_cast<double>(total);
}

double explained_variation(const RgbImage& image, const LabelMap& seg) {
    check_dims(image.height(), image.width(), seg.height(), seg.width(), "explained_variation");
    const std::size_t n = seg.size();
    std::array<double, 3> mean{};
    for (std::size_t i = 0; i < n; ++i) {
        for (int ch = 0; ch < 3; ++ch) mean[ch] += image.pixel(i)[ch];
    }
    for (double& m : mean) m /= static_cast<double>(n);

    std::vector<std::array<double, 3>> seg_sum(seg.k(), {0.0, 0.0, 0.0});
    std::vector<std::uint64_t> seg_count(seg.k(), 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (int ch = 0; ch < 3; ++ch) seg_sum[seg[i]][ch] += image.pixel(i)[ch];
        ++seg_count[seg[i]];
    }
    for (std::uint32_t s = 0; s < seg.k(); ++s) {
        for (double& v : seg_sum[s]) v /= static_cast<double>(seg_count[s]);
    }

    double explained = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (int ch = 0; ch < 3; ++ch) {
            const double between = seg_sum[seg[i]][ch] - mean[ch];
            const double overall = image.pixel(i)[ch] - mean[ch];
            explained += between * between;
            total += overall * overall;
        }
    }
    if (total == 0.0) return 1.0;
    return std::clamp(explained / total, 0.0, 1.0);
}

MetricReport evaluate(const LabelMap& gt, const LabelMap& seg, const RgbImage* image, int tolerance) {
    MetricReport report;
    report.asa = asa(gt, seg);
    report.br = boundary_recall(gt, seg, tolerance);
    report.ev = image ? explained_variation(*image, seg) : 0.0;
    report.has_ev = image != nullptr;
    report.k = seg.k();
    report.boundary_tolerance = tolerance;
    return report;
}

void write_report_row(std::ostream& out, const std::string& image_id, const MetricReport& report) {
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << image_id << ',' << report.k << ',' << std::fixed << std::setprecision(6) << report.asa << ',' << report.br
        << ',';
    if (report.has_ev) out << report.ev;
    out << ',' << report.boundary_tolerance << '\n';
    out.flags(flags);
    out.precision(precision);
}

}  // namespace hers
