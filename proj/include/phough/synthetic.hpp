#pragma once

#include "phough/curve_family.hpp"
#include "phough/grid.hpp"

#include <cstdint>
#include <vector>

namespace phough {

enum class Branch { lower, upper, both };

/// A piece of a curve: `count` abscissae uniformly spread over [x_lo, x_hi].
struct ArcSpec {
    ParameterVector lambda;
    double x_lo = 0.0;
    double x_hi = 1.0;
    std::size_t count = 100;
    Branch branch = Branch::upper;
};

/// Points of one arc; abscissae without a real ordinate are skipped.
std::vector<ImagePoint> arc_points(const CurveFamily& family, const ArcSpec& arc);

/// Points with a generator label per point (-1 for noise).
struct LabeledPoints {
    std::vector<ImagePoint> points;
    std::vector<int> labels;
};

/// Concatenates the arcs (label = arc index) and appends `noise_count`
/// uniform points drawn from the box [x_lo, x_hi] x [y_lo, y_hi].
LabeledPoints compose_arcs(const CurveFamily& family, const std::vector<ArcSpec>& arcs, std::size_t noise_count,
                           double x_lo, double x_hi, double y_lo, double y_hi, std::uint64_t seed);

/// Closed bean-shaped outline (convex top, notched bottom) sampled at
/// `count` equally spaced polar angles, centred on the origin with
/// half-width `half_width` and half-height `half_height`.
std::vector<ImagePoint> vertebra_profile(std::size_t count = 959, double half_width = 2.4, double half_height = 2.0);

/// Elliptic-family grid with 15 x 147 x 7 x 21 = 324135 cells: centers
/// a in [-5, 5], b in [-6, 6], m in {-3.5, ..., 2.5} (no zero center) and
/// n in [-2.5, 2.5]. Sized for unit-scale outlines such as vertebra_profile().
GridSpec profile_grid();

}  // namespace phough
