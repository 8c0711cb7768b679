#pragma once

#include "phough/curve_family.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace phough {

/// 8-bit grayscale raster, row-major.
struct GrayImage {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    GrayImage() = default;
    GrayImage(std::size_t w, std::size_t h, std::uint8_t fill = 0) : width(w), height(h), pixels(w * h, fill) {}

    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }
    std::uint8_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;
};

/// Edge pixels as points (x = column, y = row), row-major order.
struct EdgeMap {
    std::vector<ImagePoint> points;
};

/// Sub-image [x0, x0 + w) x [y0, y0 + h). Throws InvalidImage when the
/// window leaves the image or is empty.
GrayImage crop(const GrayImage& img, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h);

/// Canny edge detector: Gaussian smoothing, 3x3 Sobel gradients,
/// 4-direction non-maximum suppression and 8-connected hysteresis, with
/// mirrored borders. Thresholds are fractions of the largest gradient
/// magnitude. Pixels on the outermost image border never become edges.
EdgeMap canny_edges(const GrayImage& img, double sigma, double low_frac, double high_frac);

/// Enclosing simple polygon whose vertices are input points and whose
/// interior angles never exceed pi + alpha; counter-clockwise, starting at
/// the lowest-then-leftmost vertex.
///
/// Starts from the convex hull and keeps cutting notches, longest edges
/// first: an edge is replaced by the chain of input points (monotone along
/// the edge) that removes the most area while keeping every point inside
/// and every touched angle within the bound. Input points lying on the
/// boundary become vertices.
/// Throws DegenerateInput for fewer than three distinct or all-collinear
/// points, InvalidInput for alpha outside [0, pi).
std::vector<ImagePoint> alpha_concave_hull(std::span<const ImagePoint> points, double alpha);

/// Interior angle at `v` of a counter-clockwise polygon with neighbours
/// `prev` and `next`, in (0, 2pi).
double interior_angle(ImagePoint prev, ImagePoint v, ImagePoint next);

}  // namespace phough
