// phough: edge extraction, hull, piecewise detection, rendering and benchmarking.

#include "phough/bench.hpp"
#include "phough/error.hpp"
#include "phough/io.hpp"
#include "phough/piecewise.hpp"
#include "phough/preprocess.hpp"
#include "phough/render.hpp"
#include "phough/synthetic.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using namespace phough;

namespace {

struct DetectFlags {
    std::string points, grid, family = "elliptic", config, output, strategy = "subtraction", topology;
    std::optional<double> threshold_frac, neighbor_radius;
    std::optional<std::uint32_t> min_votes;
    std::optional<std::size_t> min_component_size;
};

/// Config file first (if any), then explicit flags on top.
DetectorConfig resolve_config(const DetectFlags& f) {
    DetectorConfig c = f.config.empty() ? DetectorConfig{} : config_from_json(read_json(f.config));
    if (f.threshold_frac) c.threshold_frac = *f.threshold_frac;
    if (f.min_votes) c.min_votes = *f.min_votes;
    if (f.neighbor_radius) c.neighbor_radius = *f.neighbor_radius;
    if (f.min_component_size) c.min_component_size = *f.min_component_size;
    if (!f.topology.empty()) c.topology = topology_from_string(f.topology);
    c.validate();
    return c;
}

void add_detector_flags(CLI::App* cmd, DetectFlags& f) {
    cmd->add_option("--points", f.points, "Point list (x,y per line)")->required();
    cmd->add_option("--grid", f.grid, "Parameter grid JSON")->required();
    cmd->add_option("--family", f.family, "Curve family")->capture_default_str();
    cmd->add_option("--config", f.config, "Detector configuration JSON");
    cmd->add_option("--threshold-frac", f.threshold_frac, "Stop once this share of points or fewer remains");
    cmd->add_option("--min-votes", f.min_votes, "Smallest accepted peak");
    cmd->add_option("--neighbor-radius", f.neighbor_radius, "Connectivity radius between supporters");
    cmd->add_option("--min-component-size", f.min_component_size, "Smallest connected group kept as a curve");
    cmd->add_option("--topology", f.topology, "automatic, open or closed");
    cmd->add_option("--output", f.output, "Output JSON")->required();
}

void print_summary(const DetectionResult& r, std::size_t n) {
    std::size_t assigned = 0;
    for (const auto& s : r.model.segments) assigned += s.supporters.size();
    std::printf("%zu segments, %zu/%zu points assigned, %s profile, stop: %s\n", r.model.segments.size(), assigned, n,
                r.model.closed ? "closed" : "open", std::string(to_string(r.stop_reason)).c_str());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Piecewise Hough transform for elliptic cubic curves"};
    app.require_subcommand(1);

    std::string in, out;
    double sigma = 1.4, low = 0.1, high = 0.3;
    std::vector<std::size_t> window;
    auto* edges = app.add_subcommand("edges", "Canny edge pixels of a PGM image");
    edges->add_option("--input", in, "PGM image")->required();
    edges->add_option("--sigma", sigma, "Gaussian smoothing sigma")->capture_default_str();
    edges->add_option("--low", low, "Low threshold, fraction of the largest gradient")->capture_default_str();
    edges->add_option("--high", high, "High threshold, fraction of the largest gradient")->capture_default_str();
    edges->add_option("--crop", window, "Region of interest: x y width height")->expected(4);
    edges->add_option("--output", out, "Point list")->required();

    double alpha = 0.7853981633974483;
    auto* hull = app.add_subcommand("hull", "Alpha-concave hull of a point list");
    hull->add_option("--input", in, "Point list")->required();
    hull->add_option("--alpha", alpha, "Largest excess over pi of an interior angle")->capture_default_str();
    hull->add_option("--output", out, "Hull vertices, counter-clockwise")->required();

    DetectFlags det;
    auto* detect = app.add_subcommand("detect", "Detect and stitch curve segments");
    add_detector_flags(detect, det);
    detect->add_option("--strategy", det.strategy, "subtraction or revote")->capture_default_str();

    std::string result;
    auto* render = app.add_subcommand("render", "SVG overlay of points and detected curves");
    render->add_option("--points", in, "Point list")->required();
    render->add_option("--result", result, "Detection result JSON")->required();
    render->add_option("--output", out, "SVG file")->required();

    DetectFlags bf;
    auto* bench = app.add_subcommand("bench", "Compare layered subtraction against re-voting");
    add_detector_flags(bench, bf);

    std::size_t count = 959;
    auto* synth = app.add_subcommand("synth", "Write a synthetic closed profile");
    synth->add_option("--count", count, "Number of points")->capture_default_str();
    synth->add_option("--output", out, "Point list")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*edges) {
            GrayImage img = load_image(in);
            if (!window.empty()) img = crop(img, window[0], window[1], window[2], window[3]);
            const auto e = canny_edges(img, sigma, low, high);
            write_points(out, e.points);
            std::printf("%zu edge points\n", e.points.size());
        } else if (*hull) {
            const auto poly = alpha_concave_hull(read_points(in), alpha);
            write_points(out, poly);
            std::printf("%zu hull vertices\n", poly.size());
        } else if (*detect) {
            const auto family = make_family(det.family);
            const auto grid = grid_from_json(read_json(det.grid));
            const auto config = resolve_config(det);
            const auto pts = read_points(det.points);
            const auto r = run_piecewise(*family, grid, pts, config, strategy_from_string(det.strategy));
            write_json(det.output, result_to_json({det.family, grid, config, r.model, r.stop_reason, pts.size(), std::nullopt}));
            print_summary(r, pts.size());
        } else if (*render) {
            const auto doc = result_from_json(read_json(result));
            const auto family = make_family(doc.family);
            render_overlay_file(*family, doc.model, read_points(in), out);
        } else if (*bench) {
            const auto family = make_family(bf.family);
            const auto grid = grid_from_json(read_json(bf.grid));
            const auto config = resolve_config(bf);
            const auto pts = read_points(bf.points);
            const auto report = bench_revote(*family, grid, pts, config);
            const auto& r = report.subtraction;
            auto stats = bench_to_json(report);
            write_json(bf.output, result_to_json({bf.family, grid, config, r.model, r.stop_reason, pts.size(), stats}));
            print_summary(r, pts.size());
            std::printf("updates: subtraction %llu, revote %llu (ratio %.3f), models %s\n",
                        static_cast<unsigned long long>(report.total_updates_subtraction),
                        static_cast<unsigned long long>(report.total_updates_revote),
                        stats["update_ratio"].get<double>(), report.identical_models ? "identical" : "DIFFER");
        } else if (*synth) {
            write_points(out, vertebra_profile(count));
        }
    } catch (const Error& e) {
        std::cerr << "phough: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "phough: malformed JSON: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
