#include "phough/grid.hpp"

#include "phough/error.hpp"

#include <cmath>
#include <limits>

namespace phough {

std::optional<std::size_t> AxisSpec::cell_of(double value) const {
    if (!std::isfinite(value)) throw InvalidInput("cannot locate a non-finite value on axis '" + name + "'");
    const double t = (value - lower_bound(0)) / spacing;
    if (t < -1.0 || t > static_cast<double>(count) + 1.0) return std::nullopt;

    // floor() can land one cell off next to a boundary; settle against the
    // boundaries exactly as lower_bound() computes them.
    auto k = static_cast<long long>(std::floor(t));
    if (value < lower_bound(static_cast<std::size_t>(std::max(k, 0LL))) && k > 0) --k;
    if (k >= -1 && value >= lower_bound(static_cast<std::size_t>(k + 1))) ++k;

    if (k < 0 || value < lower_bound(0)) return std::nullopt;
    if (static_cast<std::size_t>(k) >= count || value >= lower_bound(count)) return std::nullopt;
    return static_cast<std::size_t>(k);
}

GridSpec::GridSpec(std::vector<AxisSpec> axes, std::size_t dependent_axis)
    : axes_(std::move(axes)), dependent_axis_(dependent_axis) {
    if (axes_.empty()) throw ConfigError("grid needs at least one axis");
    if (dependent_axis_ >= axes_.size()) throw ConfigError("dependent axis index out of range");

    std::size_t total = 1;
    for (const auto& a : axes_) {
        if (!(a.spacing > 0.0) || !std::isfinite(a.spacing)) {
            throw ConfigError("axis '" + a.name + "' needs a positive finite spacing");
        }
        if (!std::isfinite(a.first_center)) throw ConfigError("axis '" + a.name + "' has a non-finite first center");
        if (a.count == 0) throw ConfigError("axis '" + a.name + "' needs at least one sample");
        if (total > std::numeric_limits<CellId>::max() / a.count) {
            throw ConfigError("grid has more cells than a CellId can address");
        }
        total *= a.count;
    }
    cell_count_ = total;

    strides_.assign(axes_.size(), 1);
    for (std::size_t k = axes_.size() - 1; k > 0; --k) strides_[k - 1] = strides_[k] * axes_[k].count;
}

std::optional<std::size_t> GridSpec::cell_of(std::size_t axis, double value) const {
    if (axis >= axes_.size()) throw InvalidIndex("axis index out of range");
    return axes_[axis].cell_of(value);
}

std::optional<CellIndex> GridSpec::cell_of(const ParameterVector& lambda) const {
    if (lambda.size() != axes_.size()) throw InvalidInput("parameter vector length does not match grid");
    std::vector<std::size_t> multi(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        auto n = axes_[k].cell_of(lambda[k]);
        if (!n) return std::nullopt;
        multi[k] = *n;
    }
    const CellId linear = linearize(multi);
    return CellIndex{std::move(multi), linear};
}

CellId GridSpec::linearize(std::span<const std::size_t> multi) const {
    if (multi.size() != axes_.size()) throw InvalidIndex("multi-index has the wrong number of axes");
    std::size_t linear = 0;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (multi[k] >= axes_[k].count) {
            throw InvalidIndex("index " + std::to_string(multi[k]) + " out of range on axis '" + axes_[k].name + "'");
        }
        linear += multi[k] * strides_[k];
    }
    return static_cast<CellId>(linear);
}

CellIndex GridSpec::delinearize(CellId linear) const {
    if (linear >= cell_count_) throw InvalidIndex("linear cell index " + std::to_string(linear) + " out of range");
    CellIndex c;
    c.linear = linear;
    c.multi.resize(axes_.size());
    std::size_t rest = linear;
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        c.multi[k] = rest / strides_[k];
        rest %= strides_[k];
    }
    return c;
}

ParameterVector GridSpec::center_of(const CellIndex& cell) const {
    if (cell.multi.size() != axes_.size()) throw InvalidIndex("multi-index has the wrong number of axes");
    std::vector<double> values(axes_.size());
    for (std::size_t k = 0; k < axes_.size(); ++k) {
        if (cell.multi[k] >= axes_[k].count) throw InvalidIndex("cell index out of range on axis '" + axes_[k].name + "'");
        values[k] = axes_[k].center(cell.multi[k]);
    }
    return ParameterVector(std::move(values));
}

ParameterVector GridSpec::center_of(CellId linear) const { return center_of(delinearize(linear)); }

void GridSpec::require_compatible(const CurveFamily& family) const {
    if (axes_.size() != family.parameter_count()) {
        throw ConfigError("grid has " + std::to_string(axes_.size()) + " axes but family '" +
                          std::string(family.name()) + "' has " + std::to_string(family.parameter_count()) +
                          " parameters");
    }
    if (dependent_axis_ != family.dependent_axis()) {
        throw ConfigError("grid dependent axis does not match family '" + std::string(family.name()) + "'");
    }
}

}  // namespace phough
