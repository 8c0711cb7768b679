#include "phough/curve_family.hpp"

#include "phough/error.hpp"

#include <algorithm>
#include <cmath>

namespace phough {

bool ParameterVector::finite() const noexcept {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

void require_parameter_shape(const CurveFamily& family, const ParameterVector& lambda) {
    if (lambda.size() != family.parameter_count()) {
        throw InvalidInput("parameter vector has " + std::to_string(lambda.size()) + " components, family '" +
                           std::string(family.name()) + "' expects " +
                           std::to_string(family.parameter_count()));
    }
    if (!lambda.finite()) throw InvalidInput("parameter vector has a non-finite component");
}

namespace {

void require_finite(ImagePoint p) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("image point has a non-finite coordinate");
}

}  // namespace

// ---------------------------------------------------------------------------
// EllipticCubicFamily

double EllipticCubicFamily::rhs(const ParameterVector& lambda, double x) {
    const double u = x - lambda[kN];
    return lambda[kM] * u * u * u - lambda[kA] * u - lambda[kB];
}

std::vector<double> EllipticCubicFamily::coefficient_vector(const ParameterVector& lambda) const {
    require_parameter_shape(*this, lambda);
    const double a = lambda[kA], b = lambda[kB], m = lambda[kM], n = lambda[kN];
    // Order: (0,0) (0,1) (0,2) (0,3) (1,0) (1,1) (1,2) (2,0) (2,1) (3,0)
    return {a * n - b - m * n * n * n,
            0.0,
            -1.0,
            0.0,
            3.0 * n * n * m - a,
            0.0,
            0.0,
            -3.0 * m * n,
            0.0,
            m};
}

bool EllipticCubicFamily::domain_check(const ParameterVector& lambda) const {
    return lambda.size() == 4 && lambda.finite() && lambda[kM] != 0.0;
}

double EllipticCubicFamily::curve_residual(const ParameterVector& lambda, ImagePoint p) const {
    require_parameter_shape(*this, lambda);
    require_finite(p);
    if (!domain_check(lambda)) throw InvalidParameter("elliptic family requires m != 0");
    return rhs(lambda, p.x) - p.y * p.y;
}

double EllipticCubicFamily::hough_residual(ImagePoint p, const ParameterVector& at) const {
    require_parameter_shape(*this, at);
    require_finite(p);
    return rhs(at, p.x) - p.y * p.y;
}

double EllipticCubicFamily::solve_dependent(ImagePoint p, std::span<const double> free_values) const {
    if (free_values.size() != 3) throw InvalidInput("elliptic family solves B from (A, M, N)");
    const double a = free_values[0], m = free_values[1], n = free_values[2];
    const double u = p.x - n;
    return m * u * u * u - a * u - p.y * p.y;
}

std::vector<double> EllipticCubicFamily::ordinates_at(const ParameterVector& lambda, double x) const {
    const double r = rhs(lambda, x);
    if (!(r >= 0.0)) return {};
    if (r == 0.0) return {0.0};
    const double y = std::sqrt(r);
    return {-y, y};
}

// ---------------------------------------------------------------------------
// Free operations

double curve_residual(const CurveFamily& family, const ParameterVector& lambda, ImagePoint p) {
    return family.curve_residual(lambda, p);
}

double hough_residual(const CurveFamily& family, ImagePoint p, const ParameterVector& at) {
    return family.hough_residual(p, at);
}

double solve_dependent(const CurveFamily& family, ImagePoint p, std::span<const double> free_values) {
    if (free_values.size() + 1 != family.parameter_count()) {
        throw InvalidInput("solve_dependent needs exactly t-1 free parameter values");
    }
    return family.solve_dependent(p, free_values);
}

std::vector<ImagePoint> sample_curve_points(const CurveFamily& family, const ParameterVector& lambda,
                                            double x_lo, double x_hi, std::size_t count) {
    require_parameter_shape(family, lambda);
    if (!family.domain_check(lambda)) throw InvalidParameter("sampling a curve outside the admissible set");
    if (count == 0) throw InvalidInput("sample count must be at least 1");
    if (!std::isfinite(x_lo) || !std::isfinite(x_hi) || x_lo > x_hi) throw InvalidInput("invalid x range");

    std::vector<ImagePoint> out;
    for (std::size_t i = 0; i < count; ++i) {
        const double x = count == 1 ? x_lo
                                    : (i + 1 == count ? x_hi
                                                      : x_lo + (x_hi - x_lo) * static_cast<double>(i) /
                                                                   static_cast<double>(count - 1));
        for (double y : family.ordinates_at(lambda, x)) out.push_back({x, y});
    }
    return out;
}

CurveRelation check_regularity_pair(const CurveFamily& family, const ParameterVector& lambda,
                                    const ParameterVector& lambda_prime, double rel_tol) {
    const auto u = family.coefficient_vector(lambda);
    const auto v = family.coefficient_vector(lambda_prime);

    auto max_abs = [](const std::vector<double>& w) {
        double s = 0.0;
        for (double c : w) s = std::max(s, std::abs(c));
        return s;
    };
    // Entries below this fraction of the largest magnitude count as zero.
    constexpr double kZeroFraction = 1e-12;
    const double zu = kZeroFraction * max_abs(u);
    const double zv = kZeroFraction * max_abs(v);

    std::size_t pivot = u.size();
    for (std::size_t i = 0; i < u.size(); ++i) {
        const bool u_zero = std::abs(u[i]) <= zu;
        const bool v_zero = std::abs(v[i]) <= zv;
        if (u_zero != v_zero) return CurveRelation::distinct_curves;
        if (!u_zero && pivot == u.size()) pivot = i;
    }
    if (pivot == u.size()) return CurveRelation::distinct_curves;  // f identically zero

    const double k = u[pivot] / v[pivot];
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::abs(u[i]) <= zu) continue;
        const double scaled = k * v[i];
        if (std::abs(u[i] - scaled) > rel_tol * std::max(std::abs(u[i]), std::abs(scaled))) {
            return CurveRelation::distinct_curves;
        }
    }
    return CurveRelation::same_curve;
}

}  // namespace phough
