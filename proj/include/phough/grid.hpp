#pragma once

#include "phough/curve_family.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace phough {

/// Flattened (row-major, first axis slowest) index of a parameter-space cell.
using CellId = std::uint32_t;

/// One sampled axis of the parameter box: `count` centers starting at
/// `first_center`, `spacing` apart. Cell k covers
/// [center(k) - spacing/2, center(k) + spacing/2).
struct AxisSpec {
    std::string name;
    double first_center = 0.0;
    double spacing = 1.0;
    std::size_t count = 1;

    double center(std::size_t k) const noexcept { return first_center + static_cast<double>(k) * spacing; }
    double lower_bound(std::size_t k) const noexcept {
        return first_center + (static_cast<double>(k) - 0.5) * spacing;
    }

    /// Zero-based cell containing `value`, or nullopt when outside the axis.
    /// Throws InvalidInput for non-finite values.
    std::optional<std::size_t> cell_of(double value) const;

    friend bool operator==(const AxisSpec&, const AxisSpec&) = default;
};

/// A cell addressed both ways; `multi` holds zero-based per-axis indices.
struct CellIndex {
    std::vector<std::size_t> multi;
    CellId linear = 0;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

/// Discretization of a box in parameter space into half-open cells.
class GridSpec {
public:
    GridSpec() = default;
    /// Throws ConfigError on empty axes, non-positive spacing or count,
    /// dependent axis out of range, or a cell count beyond CellId's range.
    GridSpec(std::vector<AxisSpec> axes, std::size_t dependent_axis);

    const std::vector<AxisSpec>& axes() const noexcept { return axes_; }
    const AxisSpec& axis(std::size_t k) const { return axes_.at(k); }
    std::size_t dimension() const noexcept { return axes_.size(); }
    std::size_t dependent_axis() const noexcept { return dependent_axis_; }
    std::size_t cell_count() const noexcept { return cell_count_; }
    std::size_t stride(std::size_t k) const { return strides_.at(k); }

    std::optional<std::size_t> cell_of(std::size_t axis, double value) const;

    /// Cell containing the whole parameter vector, if inside the box.
    std::optional<CellIndex> cell_of(const ParameterVector& lambda) const;

    CellId linearize(std::span<const std::size_t> multi) const;
    CellIndex delinearize(CellId linear) const;
    CellIndex cell(CellId linear) const { return delinearize(linear); }

    ParameterVector center_of(const CellIndex& cell) const;
    ParameterVector center_of(CellId linear) const;

    /// Throws ConfigError when the family's parameter count or dependent
    /// axis disagree with this grid.
    void require_compatible(const CurveFamily& family) const;

    friend bool operator==(const GridSpec& a, const GridSpec& b) {
        return a.axes_ == b.axes_ && a.dependent_axis_ == b.dependent_axis_;
    }

private:
    std::vector<AxisSpec> axes_;
    std::size_t dependent_axis_ = 0;
    std::vector<std::size_t> strides_;
    std::size_t cell_count_ = 0;
};

}  // namespace phough
