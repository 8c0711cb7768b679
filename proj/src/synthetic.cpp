#include "phough/synthetic.hpp"

#include "phough/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace phough {

std::vector<ImagePoint> arc_points(const CurveFamily& family, const ArcSpec& arc) {
    std::vector<ImagePoint> out;
    for (const auto& p : sample_curve_points(family, arc.lambda, arc.x_lo, arc.x_hi, arc.count)) {
        const bool keep = arc.branch == Branch::both || (arc.branch == Branch::upper ? p.y >= 0.0 : p.y <= 0.0);
        if (keep) out.push_back(p);
    }
    return out;
}

LabeledPoints compose_arcs(const CurveFamily& family, const std::vector<ArcSpec>& arcs, std::size_t noise_count,
                           double x_lo, double x_hi, double y_lo, double y_hi, std::uint64_t seed) {
    LabeledPoints out;
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        for (const auto& p : arc_points(family, arcs[i])) {
            out.points.push_back(p);
            out.labels.push_back(static_cast<int>(i));
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(x_lo, x_hi), uy(y_lo, y_hi);
    for (std::size_t i = 0; i < noise_count; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        out.points.push_back({x, y});
        out.labels.push_back(-1);
    }
    return out;
}

std::vector<ImagePoint> vertebra_profile(std::size_t count, double half_width, double half_height) {
    if (count < 3) throw InvalidInput("profile needs at least three points");
    std::vector<ImagePoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
        const double x = half_width * std::cos(t);
        double y = half_height * std::sin(t);
        if (std::sin(t) < 0.0) {
            // Posterior notch: pull the lower outline up around x = 0.
            const double w = x / (0.35 * half_width);
            y -= 0.3 * half_height * std::exp(-w * w) * std::sin(t);
        }
        out.push_back({x, y});
    }
    return out;
}

GridSpec profile_grid() {
    return GridSpec({{"a", -5.0, 10.0 / 14.0, 15},
                     {"b", -6.0, 12.0 / 146.0, 147},
                     {"m", -3.5, 1.0, 7},
                     {"n", -2.5, 0.25, 21}},
                    EllipticCubicFamily::kB);
}

}  // namespace phough
