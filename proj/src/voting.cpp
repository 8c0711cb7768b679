#include "phough/voting.hpp"

#include "phough/error.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numeric>

namespace phough {

std::uint64_t Accumulator::total() const noexcept {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

// ---------------------------------------------------------------------------
// LayeredAccumulator

LayeredAccumulator::LayeredAccumulator(GridSpec grid, std::vector<VoteLayer> layers) : grid_(std::move(grid)) {
    offsets_.reserve(layers.size() + 1);
    offsets_.push_back(0);
    std::size_t total = 0;
    for (const auto& l : layers) total += l.cells.size();
    cells_.reserve(total);

    for (std::size_t j = 0; j < layers.size(); ++j) {
        auto& l = layers[j];
        if (l.point_id != j) throw InvalidInput("layers must be supplied in point-id order");
        if (!std::is_sorted(l.cells.begin(), l.cells.end()) ||
            std::adjacent_find(l.cells.begin(), l.cells.end()) != l.cells.end()) {
            throw InvalidInput("layer cells must be sorted and unique");
        }
        if (!l.cells.empty() && l.cells.back() >= grid_.cell_count()) throw InvalidIndex("layer cell outside grid");
        cells_.insert(cells_.end(), l.cells.begin(), l.cells.end());
        offsets_.push_back(cells_.size());
    }
    active_.assign(layers.size(), 1);
    active_count_ = layers.size();
}

std::vector<PointId> LayeredAccumulator::active_ids() const {
    std::vector<PointId> ids;
    ids.reserve(active_count_);
    for (std::size_t j = 0; j < active_.size(); ++j) {
        if (active_[j]) ids.push_back(static_cast<PointId>(j));
    }
    return ids;
}

std::span<const CellId> LayeredAccumulator::cells(PointId j) const {
    if (j >= point_count()) throw InvalidIndex("point id out of range");
    return {cells_.data() + offsets_[j], offsets_[j + 1] - offsets_[j]};
}

bool LayeredAccumulator::votes_for(PointId j, CellId cell) const {
    const auto c = cells(j);
    return std::binary_search(c.begin(), c.end(), cell);
}

void LayeredAccumulator::set_active(std::span<const PointId> ids) {
    std::vector<std::uint8_t> next(active_.size(), 0);
    for (PointId j : ids) {
        if (j >= next.size()) throw InvalidRemoval("point id " + std::to_string(j) + " out of range");
        if (next[j]) throw InvalidRemoval("point id " + std::to_string(j) + " listed twice");
        next[j] = 1;
    }
    active_ = std::move(next);
    active_count_ = ids.size();
}

void LayeredAccumulator::require_removable(std::span<const PointId> ids) const {
    std::vector<std::uint8_t> seen(active_.size(), 0);
    for (PointId j : ids) {
        if (j >= active_.size()) throw InvalidRemoval("point id " + std::to_string(j) + " out of range");
        if (!active_[j]) throw InvalidRemoval("point id " + std::to_string(j) + " is not active");
        if (seen[j]) throw InvalidRemoval("point id " + std::to_string(j) + " listed twice");
        seen[j] = 1;
    }
}

void LayeredAccumulator::deactivate(std::span<const PointId> ids) {
    require_removable(ids);
    for (PointId j : ids) active_[j] = 0;
    active_count_ -= ids.size();
}

// ---------------------------------------------------------------------------
// Voting

VoteLayer vote_point(const CurveFamily& family, const GridSpec& grid, ImagePoint p, PointId id) {
    const std::size_t dims = grid.dimension();
    const std::size_t dep = grid.dependent_axis();
    const AxisSpec& dep_axis = grid.axis(dep);
    const std::size_t dep_stride = grid.stride(dep);

    std::vector<std::size_t> free_axes;
    for (std::size_t k = 0; k < dims; ++k) {
        if (k != dep) free_axes.push_back(k);
    }

    VoteLayer layer;
    layer.point_id = id;

    // Odometer over the free axes, last free axis fastest.
    std::vector<std::size_t> idx(free_axes.size(), 0);
    std::vector<double> free_values(free_axes.size());
    for (std::size_t f = 0; f < free_axes.size(); ++f) free_values[f] = grid.axis(free_axes[f]).center(0);

    bool done = false;
    while (!done) {
        const double solved = family.solve_dependent(p, free_values);
        if (std::isfinite(solved)) {
            if (auto n = dep_axis.cell_of(solved)) {
                std::size_t linear = *n * dep_stride;
                for (std::size_t f = 0; f < free_axes.size(); ++f) linear += idx[f] * grid.stride(free_axes[f]);
                layer.cells.push_back(static_cast<CellId>(linear));
            }
        }

        std::size_t f = free_axes.size();
        while (true) {
            if (f == 0) {
                done = true;
                break;
            }
            --f;
            const AxisSpec& ax = grid.axis(free_axes[f]);
            if (++idx[f] < ax.count) {
                free_values[f] = ax.center(idx[f]);
                break;
            }
            idx[f] = 0;
            free_values[f] = ax.center(0);
        }
    }

    std::sort(layer.cells.begin(), layer.cells.end());
    layer.cells.erase(std::unique(layer.cells.begin(), layer.cells.end()), layer.cells.end());
    return layer;
}

LayeredAccumulator build_layered(const CurveFamily& family, const GridSpec& grid,
                                 std::span<const ImagePoint> points) {
    if (points.empty()) throw EmptyDataset("cannot build an accumulator from an empty point set");
    grid.require_compatible(family);
    std::vector<VoteLayer> layers;
    layers.reserve(points.size());
    for (std::size_t j = 0; j < points.size(); ++j) {
        layers.push_back(vote_point(family, grid, points[j], static_cast<PointId>(j)));
    }
    return LayeredAccumulator(grid, std::move(layers));
}

Accumulator collapse(const LayeredAccumulator& acc) {
    Accumulator h(acc.grid().cell_count());
    auto counts = h.counts();
    for (std::size_t j = 0; j < acc.point_count(); ++j) {
        const auto id = static_cast<PointId>(j);
        if (!acc.is_active(id)) continue;
        for (CellId c : acc.cells(id)) ++counts[c];
    }
    return h;
}

std::uint64_t subtract_layers_in_place(LayeredAccumulator& acc, Accumulator& counts,
                                       std::span<const PointId> removed) {
    if (counts.size() != acc.grid().cell_count()) throw InvalidInput("accumulator size does not match grid");
    acc.require_removable(removed);
    std::uint64_t updates = 0;
    auto h = counts.counts();
    for (PointId j : removed) {
        for (CellId c : acc.cells(j)) {
            assert(h[c] > 0 && "accumulator is not the collapse of the active layers");
            --h[c];
        }
        updates += acc.cells(j).size();
    }
    acc.deactivate(removed);
    return updates;
}

Accumulator subtract_layers(LayeredAccumulator& acc, const Accumulator& counts, std::span<const PointId> removed) {
    Accumulator out = counts;
    subtract_layers_in_place(acc, out, removed);
    return out;
}

Accumulator vote_accumulator(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                             std::span<const PointId> ids, std::uint64_t* update_count) {
    grid.require_compatible(family);
    Accumulator h(grid.cell_count());
    auto counts = h.counts();
    std::uint64_t updates = 0;
    for (PointId j : ids) {
        if (j >= points.size()) throw InvalidIndex("point id out of range");
        const VoteLayer layer = vote_point(family, grid, points[j], j);
        for (CellId c : layer.cells) ++counts[c];
        updates += layer.cells.size();
    }
    if (update_count) *update_count = updates;
    return h;
}

std::optional<Peak> find_max(const Accumulator& counts) {
    const auto h = counts.counts();
    const auto it = std::max_element(h.begin(), h.end());  // first of equal maxima
    if (it == h.end() || *it == 0) return std::nullopt;
    return Peak{static_cast<CellId>(it - h.begin()), *it};
}

std::optional<Peak> find_max(const Accumulator& counts, std::span<const std::uint8_t> admissible) {
    const auto h = counts.counts();
    if (admissible.size() != h.size()) throw InvalidInput("admissibility mask does not match accumulator");
    std::optional<Peak> best;
    for (std::size_t c = 0; c < h.size(); ++c) {
        if (!admissible[c] || h[c] == 0) continue;
        if (!best || h[c] > best->count) best = Peak{static_cast<CellId>(c), h[c]};
    }
    return best;
}

std::vector<PointId> supporters_of_cell(const LayeredAccumulator& acc, CellId cell) {
    if (cell >= acc.grid().cell_count()) throw InvalidIndex("cell outside grid");
    std::vector<PointId> ids;
    for (std::size_t j = 0; j < acc.point_count(); ++j) {
        const auto id = static_cast<PointId>(j);
        if (acc.is_active(id) && acc.votes_for(id, cell)) ids.push_back(id);
    }
    return ids;
}

}  // namespace phough
