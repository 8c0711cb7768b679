#pragma once

#include "phough/curve_family.hpp"
#include "phough/piecewise.hpp"

#include <filesystem>
#include <span>
#include <string>

namespace phough {

struct RenderOptions {
    /// Samples per drawn branch; never fewer than 100.
    std::size_t samples = 200;
    /// Extra abscissa drawn beyond each branch's supported interval.
    double margin = 0.0;
    /// Marker radius as a fraction of the larger bounding-box side.
    double point_radius_frac = 0.004;
};

/// SVG overlay in the points' own coordinate frame (SVG y axis, i.e. down).
///
/// Elements carry classes for downstream tooling: `point` circles for the
/// input, one `segment` group per curve holding `curve` polylines (one per
/// supported branch, split where the curve has no real ordinate),
/// `junction` circles and a `legend` group with one `text` per segment.
std::string render_overlay(const CurveFamily& family, const PiecewiseModel& model, std::span<const ImagePoint> points,
                           const RenderOptions& options = {});

void render_overlay_file(const CurveFamily& family, const PiecewiseModel& model, std::span<const ImagePoint> points,
                         const std::filesystem::path& out_path, const RenderOptions& options = {});

}  // namespace phough
