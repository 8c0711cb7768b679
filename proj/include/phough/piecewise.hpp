#pragma once

#include "phough/curve_family.hpp"
#include "phough/grid.hpp"
#include "phough/voting.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace phough {

enum class ProfileTopology { automatic, open, closed };

/// How the accumulator is brought up to date after a curve's supporters
/// leave the active set.
enum class UpdateStrategy {
    layered_subtraction,  ///< decrement the removed layers, no voting
    full_revote,          ///< vote every surviving point again from scratch
};

enum class StopReason { threshold_reached, below_min_votes, no_votes };

std::string_view to_string(ProfileTopology t);
std::string_view to_string(UpdateStrategy s);
std::string_view to_string(StopReason r);
ProfileTopology topology_from_string(std::string_view s);
UpdateStrategy strategy_from_string(std::string_view s);
StopReason stop_reason_from_string(std::string_view s);

struct DetectorConfig {
    /// Iteration continues while more than threshold_frac * nu points are active.
    double threshold_frac = 0.35;
    /// Smallest peak accepted as a curve; unset means max(5, ceil(2% of nu)).
    std::optional<std::uint32_t> min_votes;
    /// Supporters closer than this are neighbours for the connectivity check.
    double neighbor_radius = 2.0;
    std::size_t min_component_size = 5;
    /// Supporters rejected by the connectivity check stay active (true) or
    /// are dropped from the active set unassigned (false).
    bool reinsert_rejected = true;
    ProfileTopology topology = ProfileTopology::automatic;

    /// Throws ConfigError when a field is out of range.
    void validate() const;
    std::uint32_t effective_min_votes(std::size_t point_count) const;

    friend bool operator==(const DetectorConfig&, const DetectorConfig&) = default;
};

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Portion of a curve actually covered by its supporters.
struct SegmentSpan {
    Interval x;                    ///< abscissae of all supporters
    std::optional<Interval> lower; ///< abscissae of supporters with y < 0
    std::optional<Interval> upper; ///< abscissae of supporters with y >= 0
    Interval angle;                ///< angular interval around the dataset centroid, radians in [0, 2pi)
    ImagePoint first_endpoint;     ///< supporter at angle.lo
    ImagePoint last_endpoint;      ///< supporter at angle.hi

    friend bool operator==(const SegmentSpan&, const SegmentSpan&) = default;
};

struct DetectedSegment {
    ParameterVector lambda_star;
    CellIndex cell;
    std::vector<PointId> supporters;  // ascending
    std::uint32_t vote_count = 0;     // == supporters.size()
    std::uint32_t peak_count = 0;     // accumulator value at the peak
    std::size_t iteration = 0;        // detection order, zero-based
    SegmentSpan span;

    friend bool operator==(const DetectedSegment&, const DetectedSegment&) = default;
};

struct PiecewiseModel {
    std::vector<DetectedSegment> segments;  // stitched order
    std::vector<ImagePoint> junctions;      // junctions[i] joins segments i and i+1 (cyclically when closed)
    std::vector<PointId> residual_points;   // never assigned, ascending
    bool closed = false;

    friend bool operator==(const PiecewiseModel&, const PiecewiseModel&) = default;
};

struct ConnectivitySplit {
    std::vector<PointId> kept;      // ascending
    std::vector<PointId> returned;  // ascending
};

/// Per-iteration bookkeeping.
struct IterationRecord {
    std::size_t iteration = 0;
    CellId cell = 0;
    std::uint32_t peak_count = 0;
    std::size_t active_before = 0;
    std::size_t supporters = 0;
    std::size_t kept = 0;
    std::size_t removed = 0;
    bool accepted = false;          ///< false when the cell was retired
    std::uint64_t accumulator_updates = 0;  ///< cell increments or decrements done by the strategy
    std::uint64_t subtraction_cost = 0;     ///< sum of |layer| over removed points
    std::uint64_t revote_cost = 0;          ///< sum of |layer| over surviving active points
    double update_seconds = 0.0;
};

struct DetectionResult {
    PiecewiseModel model;
    std::vector<IterationRecord> iterations;
    StopReason stop_reason = StopReason::threshold_reached;
    std::uint64_t initial_votes = 0;
    double build_seconds = 0.0;
};

/// State handed to an observer right before each peak search.
struct IterationView {
    std::size_t iteration;
    const Accumulator& counts;
    const LayeredAccumulator& layers;
};

using IterationObserver = std::function<void(const IterationView&)>;

/// Splits candidates into those lying in connected components (points
/// within neighbor_radius are adjacent) of at least min_component_size
/// points, and the rest.
ConnectivitySplit connectivity_filter(std::span<const ImagePoint> points, std::span<const PointId> candidates,
                                      const DetectorConfig& config);

/// Orders segments around the dataset centroid, records their spans and
/// places a junction between each consecutive pair.
PiecewiseModel stitch(std::span<const ImagePoint> points, std::vector<DetectedSegment> segments,
                      const DetectorConfig& config);

/// Iterative detect-and-remove loop over a layered accumulator.
///
/// Each round takes the highest admissible peak, gathers the active points
/// that voted for it, keeps the ones lying in large enough connected
/// components and removes them from the accumulator. A peak whose
/// supporters are all rejected is retired and the search continues. The
/// loop stops once at most threshold_frac * nu points remain active, the
/// peak drops below min_votes, or no admissible cell holds a vote.
DetectionResult run_piecewise(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                              const DetectorConfig& config,
                              UpdateStrategy strategy = UpdateStrategy::layered_subtraction,
                              const IterationObserver& observer = {});

}  // namespace phough
