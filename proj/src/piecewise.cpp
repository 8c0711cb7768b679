#include "phough/piecewise.hpp"

#include "disjoint_set.hpp"
#include "phough/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace phough {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    if (a >= kTwoPi) a = 0.0;
    return a;
}

ImagePoint centroid_of(std::span<const ImagePoint> points) {
    ImagePoint c;
    if (points.empty()) return c;
    for (const auto& p : points) {
        c.x += p.x;
        c.y += p.y;
    }
    c.x /= static_cast<double>(points.size());
    c.y /= static_cast<double>(points.size());
    return c;
}

double angle_about(ImagePoint origin, ImagePoint p) { return wrap_angle(std::atan2(p.y - origin.y, p.x - origin.x)); }

struct Gap {
    double width = 0.0;
    std::size_t after = 0;  // index (in sorted order) of the element following the gap
};

/// Largest cyclic gap between sorted angles.
Gap largest_gap(const std::vector<double>& sorted) {
    Gap g;
    if (sorted.empty()) return g;
    g.width = sorted.front() + kTwoPi - sorted.back();
    g.after = 0;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double w = sorted[i] - sorted[i - 1];
        if (w > g.width) {
            g.width = w;
            g.after = i;
        }
    }
    return g;
}

double distance(ImagePoint a, ImagePoint b) { return std::hypot(a.x - b.x, a.y - b.y); }

void extend(std::optional<Interval>& iv, double x) {
    if (!iv) {
        iv = Interval{x, x};
    } else {
        iv->lo = std::min(iv->lo, x);
        iv->hi = std::max(iv->hi, x);
    }
}

SegmentSpan compute_span(std::span<const ImagePoint> points, const std::vector<PointId>& supporters,
                         ImagePoint origin) {
    SegmentSpan span;
    std::optional<Interval> all;
    std::vector<std::pair<double, PointId>> by_angle;
    by_angle.reserve(supporters.size());
    for (PointId j : supporters) {
        const ImagePoint p = points[j];
        extend(all, p.x);
        extend(p.y < 0.0 ? span.lower : span.upper, p.x);
        by_angle.emplace_back(angle_about(origin, p), j);
    }
    if (all) span.x = *all;
    if (by_angle.empty()) return span;

    std::sort(by_angle.begin(), by_angle.end());
    std::vector<double> angles;
    angles.reserve(by_angle.size());
    for (const auto& [a, j] : by_angle) angles.push_back(a);
    const Gap gap = largest_gap(angles);
    const std::size_t first = gap.after;
    const std::size_t last = (gap.after + by_angle.size() - 1) % by_angle.size();
    span.angle = {by_angle[first].first, by_angle[last].first};
    span.first_endpoint = points[by_angle[first].second];
    span.last_endpoint = points[by_angle[last].second];
    return span;
}

ImagePoint junction_between(const SegmentSpan& a, const SegmentSpan& b, bool same_segment) {
    if (same_segment) {
        return {(a.last_endpoint.x + a.first_endpoint.x) / 2.0, (a.last_endpoint.y + a.first_endpoint.y) / 2.0};
    }
    const ImagePoint ea[2] = {a.first_endpoint, a.last_endpoint};
    const ImagePoint eb[2] = {b.first_endpoint, b.last_endpoint};
    ImagePoint best_a = ea[0], best_b = eb[0];
    double best = distance(best_a, best_b);
    for (const auto& pa : ea) {
        for (const auto& pb : eb) {
            const double d = distance(pa, pb);
            if (d < best) {
                best = d;
                best_a = pa;
                best_b = pb;
            }
        }
    }
    return {(best_a.x + best_b.x) / 2.0, (best_a.y + best_b.y) / 2.0};
}

std::vector<std::uint8_t> admissible_cells(const CurveFamily& family, const GridSpec& grid) {
    std::vector<std::uint8_t> mask(grid.cell_count());
    CellIndex cell;
    cell.multi.assign(grid.dimension(), 0);
    std::vector<double> center(grid.dimension());
    for (std::size_t k = 0; k < grid.dimension(); ++k) center[k] = grid.axis(k).center(0);
    ParameterVector lambda(center);
    for (std::size_t linear = 0; linear < mask.size(); ++linear) {
        mask[linear] = family.domain_check(lambda) ? 1 : 0;
        // advance the row-major multi-index
        for (std::size_t k = grid.dimension(); k-- > 0;) {
            if (++cell.multi[k] < grid.axis(k).count) {
                lambda[k] = grid.axis(k).center(cell.multi[k]);
                break;
            }
            cell.multi[k] = 0;
            lambda[k] = grid.axis(k).center(0);
        }
    }
    return mask;
}

}  // namespace

// ---------------------------------------------------------------------------
// Enum names

std::string_view to_string(ProfileTopology t) {
    switch (t) {
        case ProfileTopology::automatic: return "automatic";
        case ProfileTopology::open: return "open";
        case ProfileTopology::closed: return "closed";
    }
    return "automatic";
}

std::string_view to_string(UpdateStrategy s) {
    return s == UpdateStrategy::layered_subtraction ? "subtraction" : "revote";
}

std::string_view to_string(StopReason r) {
    switch (r) {
        case StopReason::threshold_reached: return "threshold_reached";
        case StopReason::below_min_votes: return "below_min_votes";
        case StopReason::no_votes: return "no_votes";
    }
    return "threshold_reached";
}

ProfileTopology topology_from_string(std::string_view s) {
    if (s == "automatic") return ProfileTopology::automatic;
    if (s == "open") return ProfileTopology::open;
    if (s == "closed") return ProfileTopology::closed;
    throw ConfigError("unknown topology '" + std::string(s) + "'");
}

UpdateStrategy strategy_from_string(std::string_view s) {
    if (s == "subtraction") return UpdateStrategy::layered_subtraction;
    if (s == "revote") return UpdateStrategy::full_revote;
    throw ConfigError("unknown update strategy '" + std::string(s) + "'");
}

StopReason stop_reason_from_string(std::string_view s) {
    if (s == "threshold_reached") return StopReason::threshold_reached;
    if (s == "below_min_votes") return StopReason::below_min_votes;
    if (s == "no_votes") return StopReason::no_votes;
    throw ConfigError("unknown stop reason '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// DetectorConfig

void DetectorConfig::validate() const {
    if (!(threshold_frac >= 0.0 && threshold_frac < 1.0)) throw ConfigError("threshold_frac must lie in [0, 1)");
    if (min_votes && *min_votes < 1) throw ConfigError("min_votes must be at least 1");
    if (!(neighbor_radius > 0.0) || !std::isfinite(neighbor_radius)) {
        throw ConfigError("neighbor_radius must be positive and finite");
    }
}

std::uint32_t DetectorConfig::effective_min_votes(std::size_t point_count) const {
    if (min_votes) return *min_votes;
    const auto two_percent = static_cast<std::uint32_t>(std::ceil(0.02 * static_cast<double>(point_count)));
    return std::max<std::uint32_t>(5, two_percent);
}

// ---------------------------------------------------------------------------
// Connectivity

ConnectivitySplit connectivity_filter(std::span<const ImagePoint> points, std::span<const PointId> candidates,
                                      const DetectorConfig& config) {
    config.validate();
    std::vector<PointId> ids(candidates.begin(), candidates.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (PointId j : ids) {
        if (j >= points.size()) throw InvalidIndex("candidate id out of range");
    }

    // Bucket by radius-sized squares so only the 3x3 neighbourhood is scanned.
    const double r = config.neighbor_radius;
    auto key_of = [r](ImagePoint p) {
        const auto bx = static_cast<std::int64_t>(std::floor(p.x / r));
        const auto by = static_cast<std::int64_t>(std::floor(p.y / r));
        return std::pair{bx, by};
    };
    struct PairHash {
        std::size_t operator()(const std::pair<std::int64_t, std::int64_t>& k) const noexcept {
            return std::hash<std::int64_t>()(k.first * 73856093LL ^ k.second * 19349663LL);
        }
    };
    std::unordered_map<std::pair<std::int64_t, std::int64_t>, std::vector<std::size_t>, PairHash> buckets;
    for (std::size_t i = 0; i < ids.size(); ++i) buckets[key_of(points[ids[i]])].push_back(i);

    detail::DisjointSet sets(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        const ImagePoint p = points[ids[i]];
        const auto [bx, by] = key_of(p);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                auto it = buckets.find({bx + dx, by + dy});
                if (it == buckets.end()) continue;
                for (std::size_t k : it->second) {
                    if (k > i && distance(p, points[ids[k]]) <= r) sets.unite(i, k);
                }
            }
        }
    }

    ConnectivitySplit split;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        (sets.component_size(i) >= config.min_component_size ? split.kept : split.returned).push_back(ids[i]);
    }
    return split;
}

// ---------------------------------------------------------------------------
// Stitching

PiecewiseModel stitch(std::span<const ImagePoint> points, std::vector<DetectedSegment> segments,
                      const DetectorConfig& config) {
    PiecewiseModel model;
    const ImagePoint origin = centroid_of(points);

    std::vector<std::uint8_t> assigned(points.size(), 0);
    std::vector<double> all_angles;
    for (const auto& s : segments) {
        for (PointId j : s.supporters) {
            if (j >= points.size()) throw InvalidIndex("supporter id out of range");
            if (assigned[j]) throw InvalidInput("segments share supporter " + std::to_string(j));
            assigned[j] = 1;
            all_angles.push_back(angle_about(origin, points[j]));
        }
    }
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (!assigned[j]) model.residual_points.push_back(static_cast<PointId>(j));
    }
    if (segments.empty()) return model;

    std::sort(all_angles.begin(), all_angles.end());
    const Gap gap = largest_gap(all_angles);
    switch (config.topology) {
        case ProfileTopology::open: model.closed = false; break;
        case ProfileTopology::closed: model.closed = true; break;
        case ProfileTopology::automatic: model.closed = gap.width < std::numbers::pi / 2.0; break;
    }
    // Closed profiles are read counter-clockwise from angle 0; open ones
    // from the end of the widest angular opening.
    const double start = model.closed ? 0.0 : all_angles[gap.after];

    struct Keyed {
        double key;
        std::size_t order;
        DetectedSegment segment;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(segments.size());
    for (std::size_t i = 0; i < segments.size(); ++i) {
        auto& s = segments[i];
        std::sort(s.supporters.begin(), s.supporters.end());
        s.span = compute_span(points, s.supporters, origin);
        std::vector<ImagePoint> own;
        own.reserve(s.supporters.size());
        for (PointId j : s.supporters) own.push_back(points[j]);
        const double key = own.empty() ? 0.0 : wrap_angle(angle_about(origin, centroid_of(own)) - start);
        keyed.push_back({key, i, std::move(s)});
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
        return a.key != b.key ? a.key < b.key : a.order < b.order;
    });
    for (auto& k : keyed) model.segments.push_back(std::move(k.segment));

    const std::size_t n = model.segments.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        model.junctions.push_back(junction_between(model.segments[i].span, model.segments[i + 1].span, false));
    }
    if (model.closed) {
        model.junctions.push_back(junction_between(model.segments[n - 1].span, model.segments[0].span, n == 1));
    }
    return model;
}

// ---------------------------------------------------------------------------
// Detection loop

DetectionResult run_piecewise(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                              const DetectorConfig& config, UpdateStrategy strategy,
                              const IterationObserver& observer) {
    if (points.empty()) throw EmptyDataset("cannot detect curves in an empty point set");
    config.validate();
    grid.require_compatible(family);

    DetectionResult result;
    const auto t_build = std::chrono::steady_clock::now();
    LayeredAccumulator layers = build_layered(family, grid, points);
    Accumulator counts = collapse(layers);
    result.build_seconds = seconds_since(t_build);
    result.initial_votes = counts.total();

    std::vector<std::uint8_t> admissible = admissible_cells(family, grid);
    const double threshold_value = config.threshold_frac * static_cast<double>(points.size());
    const std::uint32_t min_votes = config.effective_min_votes(points.size());

    std::vector<DetectedSegment> segments;
    result.stop_reason = StopReason::threshold_reached;
    for (std::size_t iteration = 0; static_cast<double>(layers.active_count()) > threshold_value; ++iteration) {
        if (observer) observer(IterationView{iteration, counts, layers});

        const auto peak = find_max(counts, admissible);
        if (!peak) {
            result.stop_reason = StopReason::no_votes;
            break;
        }
        if (peak->count < min_votes) {
            result.stop_reason = StopReason::below_min_votes;
            break;
        }

        IterationRecord rec;
        rec.iteration = iteration;
        rec.cell = peak->cell;
        rec.peak_count = peak->count;
        rec.active_before = layers.active_count();

        const std::vector<PointId> supporters = supporters_of_cell(layers, peak->cell);
        ConnectivitySplit split = connectivity_filter(points, supporters, config);
        rec.supporters = supporters.size();
        rec.kept = split.kept.size();

        if (split.kept.empty()) {
            // Nothing coherent votes here; keep the votes but never pick this cell again.
            admissible[peak->cell] = 0;
            result.iterations.push_back(rec);
            continue;
        }

        const std::vector<PointId>& removed = config.reinsert_rejected ? split.kept : supporters;
        rec.removed = removed.size();
        rec.accepted = true;
        for (PointId j : removed) rec.subtraction_cost += layers.cells(j).size();

        const auto t_update = std::chrono::steady_clock::now();
        if (strategy == UpdateStrategy::layered_subtraction) {
            rec.accumulator_updates = subtract_layers_in_place(layers, counts, removed);
        } else {
            layers.deactivate(removed);
            const std::vector<PointId> survivors = layers.active_ids();
            counts = vote_accumulator(family, grid, points, survivors, &rec.accumulator_updates);
        }
        rec.update_seconds = seconds_since(t_update);
        for (PointId j : layers.active_ids()) rec.revote_cost += layers.cells(j).size();

        DetectedSegment seg;
        seg.cell = grid.delinearize(peak->cell);
        seg.lambda_star = grid.center_of(seg.cell);
        seg.supporters = std::move(split.kept);
        seg.vote_count = static_cast<std::uint32_t>(seg.supporters.size());
        seg.peak_count = peak->count;
        seg.iteration = segments.size();
        segments.push_back(std::move(seg));
        result.iterations.push_back(rec);
    }

    result.model = stitch(points, std::move(segments), config);
    return result;
}

}  // namespace phough
