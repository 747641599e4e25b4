#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "hers/image.hpp"

namespace hers {

inline constexpr int kDefaultBoundaryTolerance = 2;

struct MetricReport {
    double asa = 0.0;
    double br = 0.0;
    double ev = 0.0;
    std::uint32_t k = 0;
    int boundary_tolerance = kDefaultBoundaryTolerance;
    bool has_ev = true;  // false when no image was available
};

/// (1/N) sum over superpixels of the largest overlap with a ground-truth class.
double asa(const LabelMap& gt, const LabelMap& seg);

/// A pixel is a boundary pixel when its right or bottom neighbor carries a
/// different label.
bool is_boundary(const LabelMap& labels, int r, int c);

/// Fraction of ground-truth boundary pixels with a segmentation boundary pixel
/// within Chebyshev distance `tolerance`. 1.0 when gt has no boundary.
double boundary_recall(const LabelMap& gt, const LabelMap& seg, int tolerance = kDefaultBoundaryTolerance);

/// sum_i |mu_seg(i) - mu|^2 / sum_i |p_i - mu|^2 over pixels and RGB jointly.
/// 1.0 for constant images.
double explained_variation(const RgbImage& image, const LabelMap& seg);

/// EV is skipped when `image` is null.
MetricReport evaluate(const LabelMap& gt, const LabelMap& seg, const RgbImage* image, int tolerance);

/// CSV row: image_id,k,asa,br,ev,tolerance (ev empty when skipped)
void write_report_row(std::ostream& out, const std::string& image_id, const MetricReport& report);
inline constexpr const char* kReportHeader = "image_id,k,asa,br,ev,tolerance";

}  // namespace hers
