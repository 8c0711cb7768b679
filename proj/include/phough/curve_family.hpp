#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace phough {

/// A point in the image plane.
struct ImagePoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const ImagePoint&, const ImagePoint&) = default;
};

/// Ordered model parameters of a curve family, e.g. (a, b, m, n).
///
/// The same representation is used for a concrete curve's parameters and for
/// a point of the parameter space seen as a Hough-transform coordinate.
class ParameterVector {
public:
    ParameterVector() = default;
    ParameterVector(std::initializer_list<double> values) : values_(values) {}
    explicit ParameterVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t k) const { return values_[k]; }
    double& operator[](std::size_t k) { return values_[k]; }
    std::span<const double> values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    /// True when every component is finite.
    bool finite() const noexcept;

    friend bool operator==(const ParameterVector&, const ParameterVector&) = default;

private:
    std::vector<double> values_;
};

/// Contract for a parametric family of plane curves f_lambda(x, y) = 0 whose
/// coefficients are polynomials in the parameters.
///
/// Exactly one parameter axis (the dependent axis) must enter the
/// Hough-transform polynomial linearly with a coefficient that never
/// vanishes; voting sweeps the other axes and solves for that one.
class CurveFamily {
public:
    virtual ~CurveFamily() = default;

    virtual std::string_view name() const = 0;
    virtual std::size_t parameter_count() const = 0;
    /// Total degree d of f_lambda, independent of lambda.
    virtual int degree() const = 0;
    virtual std::size_t dependent_axis() const = 0;
    virtual std::vector<std::string> axis_names() const = 0;

    /// Coefficients g_ij(lambda) in lexicographic (i, j) order over
    /// 0 <= i + j <= d, where g_ij multiplies x^i y^j.
    virtual std::vector<double> coefficient_vector(const ParameterVector& lambda) const = 0;

    /// Whether lambda lies in the admissible open set of the family.
    virtual bool domain_check(const ParameterVector& lambda) const = 0;

    /// f_lambda(P). Throws InvalidParameter outside the admissible set.
    virtual double curve_residual(const ParameterVector& lambda, ImagePoint p) const = 0;

    /// The Hough-transform polynomial of P evaluated at a parameter point.
    virtual double hough_residual(ImagePoint p, const ParameterVector& at) const = 0;

    /// Value of the dependent parameter that makes hough_residual vanish.
    /// `free_values` holds the other t-1 components in axis order.
    virtual double solve_dependent(ImagePoint p, std::span<const double> free_values) const = 0;

    /// Real ordinates y with f_lambda(x, y) = 0, ascending. Empty when none.
    virtual std::vector<double> ordinates_at(const ParameterVector& lambda, double x) const = 0;
};

/// y^2 = m (x - n)^3 - a (x - n) - b with lambda = (a, b, m, n), m != 0.
///
/// Cubic in Weierstrass-like form; the Hough transform of a point is the
/// quartic M (x_P - N)^3 - A (x_P - N) - B - y_P^2 = 0, linear in B.
class EllipticCubicFamily final : public CurveFamily {
public:
    static constexpr std::size_t kA = 0;
    static constexpr std::size_t kB = 1;
    static constexpr std::size_t kM = 2;
    static constexpr std::size_t kN = 3;

    std::string_view name() const override { return "elliptic"; }
    std::size_t parameter_count() const override { return 4; }
    int degree() const override { return 3; }
    std::size_t dependent_axis() const override { return kB; }
    std::vector<std::string> axis_names() const override { return {"a", "b", "m", "n"}; }

    std::vector<double> coefficient_vector(const ParameterVector& lambda) const override;
    bool domain_check(const ParameterVector& lambda) const override;
    double curve_residual(const ParameterVector& lambda, ImagePoint p) const override;
    double hough_residual(ImagePoint p, const ParameterVector& at) const override;
    double solve_dependent(ImagePoint p, std::span<const double> free_values) const override;
    std::vector<double> ordinates_at(const ParameterVector& lambda, double x) const override;

    /// Right-hand side m (x - n)^3 - a (x - n) - b.
    static double rhs(const ParameterVector& lambda, double x);
};

enum class CurveRelation { same_curve, distinct_curves };

double curve_residual(const CurveFamily& family, const ParameterVector& lambda, ImagePoint p);
double hough_residual(const CurveFamily& family, ImagePoint p, const ParameterVector& at);
double solve_dependent(const CurveFamily& family, ImagePoint p, std::span<const double> free_values);

/// Points on the curve at `count` uniformly spaced abscissae of
/// [x_lo, x_hi] (endpoints included), every real branch emitted.
/// Abscissae with no real ordinate contribute nothing.
std::vector<ImagePoint> sample_curve_points(const CurveFamily& family, const ParameterVector& lambda,
                                            double x_lo, double x_hi, std::size_t count);

/// Whether the two coefficient vectors are proportional with a nonzero
/// factor, i.e. whether lambda and lambda_prime describe the same zero locus.
/// Entries are compared with relative tolerance `rel_tol`; coefficients
/// can reach 1e4 on ordinary parameter boxes, so a loose tolerance would
/// merge parameter vectors that differ in the sixth decimal.
CurveRelation check_regularity_pair(const CurveFamily& family, const ParameterVector& lambda,
                                    const ParameterVector& lambda_prime, double rel_tol = 1e-12);

/// Throws InvalidInput unless the vector has the family's length and finite entries.
void require_parameter_shape(const CurveFamily& family, const ParameterVector& lambda);

}  // namespace phough
