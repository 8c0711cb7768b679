#pragma once

#include "phough/curve_family.hpp"
#include "phough/grid.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace phough {

/// Zero-based position of a point in the input dataset.
using PointId = std::uint32_t;

/// Cells voted by one point: the nonzero entries of its binary layer.
struct VoteLayer {
    PointId point_id = 0;
    std::vector<CellId> cells;  // sorted, unique
};

/// Dense vote counts over every cell of a grid.
class Accumulator {
public:
    using Count = std::uint32_t;

    Accumulator() = default;
    explicit Accumulator(std::size_t cells) : counts_(cells, 0) {}

    std::size_t size() const noexcept { return counts_.size(); }
    Count operator[](CellId c) const { return counts_[c]; }
    Count& operator[](CellId c) { return counts_[c]; }
    std::span<const Count> counts() const noexcept { return counts_; }
    std::span<Count> counts() noexcept { return counts_; }

    /// Sum of all counts.
    std::uint64_t total() const noexcept;

    friend bool operator==(const Accumulator&, const Accumulator&) = default;

private:
    std::vector<Count> counts_;
};

/// Per-point binary vote ledgers plus the set of still-active points.
///
/// Layers are stored compressed (one sorted cell list per point) and never
/// change after construction; only the active set shrinks.
class LayeredAccumulator {
public:
    LayeredAccumulator(GridSpec grid, std::vector<VoteLayer> layers);

    const GridSpec& grid() const noexcept { return grid_; }
    std::size_t point_count() const noexcept { return offsets_.size() - 1; }
    std::size_t active_count() const noexcept { return active_count_; }
    bool is_active(PointId j) const { return active_.at(j) != 0; }
    std::vector<PointId> active_ids() const;

    std::span<const CellId> cells(PointId j) const;
    bool votes_for(PointId j, CellId cell) const;

    /// Total number of stored votes across all layers.
    std::size_t stored_votes() const noexcept { return cells_.size(); }

    /// Replaces the active set. Throws InvalidRemoval on unknown or repeated ids.
    void set_active(std::span<const PointId> ids);

    /// Removes points from the active set. Throws InvalidRemoval when an id is
    /// unknown, repeated, or already inactive; nothing changes in that case.
    void deactivate(std::span<const PointId> ids);

    /// Throws InvalidRemoval unless every id is active and listed once.
    void require_removable(std::span<const PointId> ids) const;

private:
    GridSpec grid_;
    std::vector<std::size_t> offsets_;
    std::vector<CellId> cells_;
    std::vector<std::uint8_t> active_;
    std::size_t active_count_ = 0;
};

/// Votes one point: sweeps every combination of free-axis centers, solves
/// the dependent parameter and records the cell it falls in. Solutions
/// outside the dependent axis are dropped.
VoteLayer vote_point(const CurveFamily& family, const GridSpec& grid, ImagePoint p, PointId id = 0);

/// One layer per point, input order, all points active.
/// Throws EmptyDataset on empty input and ConfigError on a family/grid mismatch.
LayeredAccumulator build_layered(const CurveFamily& family, const GridSpec& grid,
                                 std::span<const ImagePoint> points);

/// Sum of the active layers.
Accumulator collapse(const LayeredAccumulator& acc);

/// Removes the votes of `removed` from `counts` and from the active set,
/// without re-voting. `counts` must equal collapse(acc) for the current
/// active set. Returns the number of cell decrements performed.
std::uint64_t subtract_layers_in_place(LayeredAccumulator& acc, Accumulator& counts,
                                       std::span<const PointId> removed);

/// Value-returning form of subtract_layers_in_place.
Accumulator subtract_layers(LayeredAccumulator& acc, const Accumulator& counts,
                            std::span<const PointId> removed);

/// One-pass voting straight into a dense accumulator, no layers kept.
/// `update_count`, when given, receives the number of increments.
Accumulator vote_accumulator(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                             std::span<const PointId> ids, std::uint64_t* update_count = nullptr);

struct Peak {
    CellId cell = 0;
    Accumulator::Count count = 0;

    friend bool operator==(const Peak&, const Peak&) = default;
};

/// Largest count, ties to the smallest linear index; nullopt when every
/// count is zero.
std::optional<Peak> find_max(const Accumulator& counts);

/// As find_max, skipping cells whose `admissible` entry is zero.
std::optional<Peak> find_max(const Accumulator& counts, std::span<const std::uint8_t> admissible);

/// Active points whose layer contains `cell`, ascending.
std::vector<PointId> supporters_of_cell(const LayeredAccumulator& acc, CellId cell);

}  // namespace phough
