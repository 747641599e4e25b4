// hers: superpixel segmentation from entropy-rate merge hierarchies.
//
//   hers segment --image a.png --k 200,400 --out d/
//   hers extract --hierarchy d/a.hrs1 --width 481 --k 100 --out d/
//   hers eval    --gt gt.pgm --seg d/a_k200.pgm --image a.png
//   hers bench   --image a.png --k 200,400,600 --solver hers

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hers/affinity.hpp"
#include "hers/error.hpp"
#include "hers/exec.hpp"
#include "hers/hierarchy.hpp"
#include "hers/io.hpp"
#include "hers/lazy_greedy.hpp"
#include "hers/metrics.hpp"
#include "hers/overlay.hpp"

namespace {

using namespace hers;
using Clock = std::chrono::steady_clock;

enum ExitCode { kOk = 0, kFailure = 1, kArgument = 2, kIo = 3, kFormat = 4 };

struct RunConfig {
    std::string image_path;
    std::string affinity_source;  // empty: file when --affinity-file is given, else gaussian
    std::string save_affinity_path;
    std::string affinity_path;
    std::optional<double> sigma;
    std::string edge_prob_path;
    double epsilon = kDefaultEdgeEpsilon;
    std::vector<std::uint32_t> ks;
    std::string out_dir = ".";
    std::string label_format = "pgm";
    std::vector<int> permutation;
    int tolerance = kDefaultBoundaryTolerance;
    int threads = 0;
};

std::vector<std::uint32_t> sorted_ks(std::vector<std::uint32_t> ks) {
    if (ks.empty()) throw ArgumentError("--k needs at least one value");
    for (std::uint32_t k : ks) {
        if (k == 0) throw ArgumentError("--k values must be >= 1");
    }
    std::sort(ks.begin(), ks.end());
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

void check_ks(const std::vector<std::uint32_t>& ks, std::uint32_t nodes) {
    for (std::uint32_t k : ks) {
        if (k > nodes) throw ArgumentError("k = " + std::to_string(k) + " exceeds the pixel count " + std::to_string(nodes));
    }
}

double millis_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string label_extension(const RunConfig& cfg) {
    if (cfg.label_format == "pgm") return ".pgm";
    if (cfg.label_format == "csv") return ".csv";
    throw ArgumentError("--label-format must be pgm or csv");
}

struct Inputs {
    std::optional<RgbImage> image;
    AffinityMap affinity;
    std::string stem;
};

Inputs load_inputs(const RunConfig& cfg) {
    Inputs in;
    std::string source = cfg.affinity_source;
    if (source.empty()) source = cfg.affinity_path.empty() ? "gaussian" : "file";
    if (!cfg.affinity_path.empty() && source == "gaussian") {
        throw ArgumentError("--affinity-file given but --affinity is gaussian; use --affinity file");
    }
    if (!cfg.image_path.empty()) {
        in.image = load_image(cfg.image_path);
        in.stem = fs::path(cfg.image_path).stem().string();
    }
    if (source == "gaussian") {
        if (!in.image) throw ArgumentError("--affinity gaussian needs --image");
        const GaussianParams params = cfg.sigma ? GaussianParams{*cfg.sigma} : auto_sigma(*in.image);
        in.affinity = gaussian_affinity(*in.image, params);
    } else if (source == "file") {
        if (cfg.affinity_path.empty()) throw ArgumentError("--affinity file needs --affinity-file");
        in.affinity = read_affinity(cfg.affinity_path);
        if (!cfg.permutation.empty()) {
            if (cfg.permutation.size() != kDirs) throw ArgumentError("--perm needs exactly 8 entries");
            ChannelPerm perm{};
            std::copy(cfg.permutation.begin(), cfg.permutation.end(), perm.begin());
            in.affinity = permute_channels(in.affinity, perm);
        }
        if (in.stem.empty()) in.stem = fs::path(cfg.affinity_path).stem().string();
        if (in.image && (in.image->height() != in.affinity.height() || in.image->width() != in.affinity.width())) {
            throw ArgumentError("image and affinity map dimensions differ");
        }
    } else {
        throw ArgumentError("--affinity must be gaussian or file");
    }
    if (!cfg.edge_prob_path.empty()) {
        in.affinity = apply_edge_probs(in.affinity, read_edge_probs(cfg.edge_prob_path), cfg.epsilon);
    }
    return in;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory " + dir + ": " + ec.message());
}

void write_outputs(const RunConfig& cfg, const std::string& stem, const std::vector<std::uint32_t>& ks,
                   const std::vector<LabelMap>& maps, const RgbImage* image) {
    const std::string ext = label_extension(cfg);
    for (std::size_t i = 0; i < ks.size(); ++i) {
        const fs::path base = fs::path(cfg.out_dir) / (stem + "_k" + std::to_string(ks[i]));
        write_labels(maps[i], base.string() + ext, cfg.label_format == "csv" ? LabelFormat::Csv : LabelFormat::Pgm);
        if (image) save_png(base.string() + "_overlay.png", image->height(), image->width(), boundary_overlay(*image, maps[i]));
    }
}

int cmd_segment(const RunConfig& cfg) {
    const auto ks = sorted_ks(cfg.ks);
    label_extension(cfg);
    const Inputs in = load_inputs(cfg);
    check_ks(ks, static_cast<std::uint32_t>(in.affinity.size()));
    ensure_dir(cfg.out_dir);
    if (!cfg.save_affinity_path.empty()) write_affinity(in.affinity, cfg.save_affinity_path);

    const MergeHierarchy h = build_hierarchy(build_graph(in.affinity));
    write_hierarchy(h, fs::path(cfg.out_dir) / (in.stem + ".hrs1"));
    if (!in.image) std::cerr << "warning: no --image given, skipping boundary overlays\n";
    write_outputs(cfg, in.stem, ks, extract_many(h, ks), in.image ? &*in.image : nullptr);
    return kOk;
}

int cmd_extract(const RunConfig& cfg, const std::string& hierarchy_path, int height, int width) {
    const auto ks = sorted_ks(cfg.ks);
    label_extension(cfg);
    MergeHierarchy h = read_hierarchy(hierarchy_path);
    if (width > 0 || height > 0) {
        if (width <= 0) width = static_cast<int>(h.node_count / static_cast<std::uint32_t>(height));
        if (height <= 0) height = static_cast<int>(h.node_count / static_cast<std::uint32_t>(width));
        set_shape(h, height, width);
    }
    check_ks(ks, h.node_count);
    ensure_dir(cfg.out_dir);
    std::optional<RgbImage> image;
    if (!cfg.image_path.empty()) {
        image = load_image(cfg.image_path);
        if (image->height() != h.height || image->width() != h.width) {
            throw ArgumentError("--image dimensions do not match the hierarchy shape (pass --width)");
        }
    }
    write_outputs(cfg, fs::path(hierarchy_path).stem().string(), ks, extract_many(h, ks), image ? &*image : nullptr);
    return kOk;
}

int cmd_eval(const std::string& gt_path, const std::string& seg_path, const std::string& image_path, int tolerance,
             std::string id, const std::string& append_path, bool header) {
    const LabelMap gt = read_labels(gt_path);
    const LabelMap seg = read_labels(seg_path);
    std::optional<RgbImage> image;
    if (!image_path.empty()) image = load_image(image_path);
    const MetricReport report = evaluate(gt, seg, image ? &*image : nullptr, tolerance);
    if (id.empty()) id = fs::path(seg_path).stem().string();
    if (header) std::cout << kReportHeader << '\n';
    write_report_row(std::cout, id, report);
    if (!append_path.empty()) {
        const bool fresh = !fs::exists(append_path);
        std::ofstream out(append_path, std::ios::app);
        if (!out) throw IoError("cannot append to " + append_path);
        if (fresh) out << kReportHeader << '\n';
        write_report_row(out, id, report);
        if (!out) throw IoError("write failed: " + append_path);
    }
    return kOk;
}

int cmd_bench(const RunConfig& cfg, const std::string& solver) {
    const auto ks = sorted_ks(cfg.ks);
    if (solver != "hers" && solver != "lazy") throw ArgumentError("--solver must be hers or lazy");
    auto start = Clock::now();
    const Inputs in = load_inputs(cfg);
    const PixelGraph graph = build_graph(in.affinity);
    check_ks(ks, graph.node_count());
    std::printf("phase,k,millis\n");
    std::printf("prepare,0,%.3f\n", millis_since(start));

    double cumulative = 0.0;
    if (solver == "hers") {
        start = Clock::now();
        const MergeHierarchy h = build_hierarchy(graph);
        cumulative = millis_since(start);
        std::printf("build,0,%.3f\n", cumulative);
        for (std::uint32_t k : ks) {
            start = Clock::now();
            (void)extract(h, k);
            const double t = millis_since(start);
            cumulative += t;
            std::printf("extract,%u,%.3f\ncumulative,%u,%.3f\n", k, t, k, cumulative);
        }
    } else {
        for (std::uint32_t k : ks) {
            start = Clock::now();
            (void)lazy_greedy_segment(graph, k);
            const double t = millis_since(start);
            cumulative += t;
            std::printf("segment,%u,%.3f\ncumulative,%u,%.3f\n", k, t, k, cumulative);
        }
    }
    return kOk;
}

void add_common(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--k", cfg.ks, "Superpixel counts, comma separated")->required()->delimiter(',');
    cmd->add_option("--out", cfg.out_dir, "Output directory");
    cmd->add_option("--label-format", cfg.label_format, "Label map format: pgm or csv");
}

void add_inputs(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--image", cfg.image_path, "Input image (PNG or binary PPM)");
    cmd->add_option("--affinity", cfg.affinity_source, "Affinity source: gaussian or file (default: file if --affinity-file is set)");
    cmd->add_option("--affinity-file", cfg.affinity_path, "AFF8 affinity map");
    cmd->add_option("--sigma", cfg.sigma, "Gaussian bandwidth (default: mean neighbor distance)");
    cmd->add_option("--edge-probs", cfg.edge_prob_path, "EDG1 edge-probability map dividing the affinities");
    cmd->add_option("--epsilon", cfg.epsilon, "Offset added to the edge-probability divisor");
    cmd->add_option("--perm", cfg.permutation, "Channel permutation for foreign AFF8 files (8 entries)")->delimiter(',');
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hierarchical entropy-rate superpixel segmentation"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--threads", cfg.threads, "OpenMP threads (default: runtime setting)");

    auto* segment = app.add_subcommand("segment", "Build a hierarchy and write label maps for each k");
    add_inputs(segment, cfg);
    segment->add_option("--save-affinity", cfg.save_affinity_path, "Also write the affinities used as AFF8");
    add_common(segment, cfg);

    std::string hierarchy_path;
    int height = 0;
    int width = 0;
    auto* extract_cmd = app.add_subcommand("extract", "Replay a stored HRS1 hierarchy at new k values");
    extract_cmd->add_option("--hierarchy", hierarchy_path, "HRS1 file")->required();
    extract_cmd->add_option("--width", width, "Image width (HRS1 stores no shape)");
    extract_cmd->add_option("--height", height, "Image height");
    extract_cmd->add_option("--image", cfg.image_path, "Image for boundary overlays");
    add_common(extract_cmd, cfg);

    std::string gt_path;
    std::string seg_path;
    std::string id;
    std::string append_path;
    bool header = false;
    auto* eval = app.add_subcommand("eval", "Print ASA, BR and EV as a CSV row");
    eval->add_option("--gt", gt_path, "Ground-truth label map (PGM or CSV)")->required();
    eval->add_option("--seg", seg_path, "Segmentation label map (PGM or CSV)")->required();
    eval->add_option("--image", cfg.image_path, "Image for explained variation");
    eval->add_option("--tolerance", cfg.tolerance, "Boundary tolerance in pixels");
    eval->add_option("--id", id, "Image id for the CSV row (default: seg file stem)");
    eval->add_option("--append", append_path, "Also append the row to this CSV file");
    eval->add_flag("--header", header, "Print the CSV header first");

    std::string solver = "hers";
    auto* bench = app.add_subcommand("bench", "Time hierarchy build and per-k extraction");
    add_inputs(bench, cfg);
    bench->add_option("--k", cfg.ks, "Superpixel counts, comma separated")->required()->delimiter(',');
    bench->add_option("--solver", solver, "hers or lazy");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kArgument;
    }

    try {
        if (cfg.threads > 0) set_threads(cfg.threads);
        if (*segment) return cmd_segment(cfg);
        if (*extract_cmd) return cmd_extract(cfg, hierarchy_path, height, width);
        if (*eval) return cmd_eval(gt_path, seg_path, cfg.image_path, cfg.tolerance, id, append_path, header);
        if (*bench) return cmd_bench(cfg, solver);
    } catch (const ArgumentError& e) {
        std::cerr << "error (argument): " << e.what() << '\n';
        return kArgument;
    } catch (const IoError& e) {
        std::cerr << "error (io): " << e.what() << '\n';
        return kIo;
    } catch (const FormatError& e) {
        std::cerr << "error (format): " << e.what() << '\n';
        return kFormat;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kFailure;
    }
    return kFailure;
}
