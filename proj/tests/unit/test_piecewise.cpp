#include "phough/error.hpp"
#include "phough/piecewise.hpp"
#include "phough/synthetic.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

using namespace phough;

namespace {

GridSpec line_grid() {
    return GridSpec({{"a", 0, 1, 1}, {"b", -2, 1, 5}, {"m", 1, 1, 1}, {"n", 0, 1, 1}}, EllipticCubicFamily::kB);
}

const std::vector<ImagePoint> kThree{{1, 1}, {1, 0}, {1, -1}};

DetectorConfig permissive() {
    DetectorConfig c;
    c.threshold_frac = 0.0;
    c.min_votes = 1;
    c.min_component_size = 1;
    return c;
}

DetectedSegment segment_of(std::vector<PointId> ids) {
    DetectedSegment s;
    s.supporters = std::move(ids);
    s.vote_count = static_cast<std::uint32_t>(s.supporters.size());
    return s;
}

/// Grid holding both generators of two_arcs() at cell centers.
GridSpec two_arc_grid() {
    return GridSpec({{"a", -2, 0.5, 9}, {"b", -3, 0.25, 25}, {"m", 0.5, 0.5, 4}, {"n", -2, 0.5, 9}},
                    EllipticCubicFamily::kB);
}

}  // namespace

TEST(Piecewise, ThreePointFixture) {
    EllipticCubicFamily f;
    const auto r = run_piecewise(f, line_grid(), kThree, permissive());
    ASSERT_EQ(r.model.segments.size(), 2u);
    std::vector<DetectedSegment> by_iter = r.model.segments;
    std::sort(by_iter.begin(), by_iter.end(), [](auto& a, auto& b) { return a.iteration < b.iteration; });
    EXPECT_EQ(by_iter[0].lambda_star, (ParameterVector{0, 0, 1, 0}));
    EXPECT_EQ(by_iter[0].supporters, (std::vector<PointId>{0, 2}));
    EXPECT_EQ(by_iter[1].lambda_star, (ParameterVector{0, 1, 1, 0}));
    EXPECT_EQ(by_iter[1].supporters, (std::vector<PointId>{1}));
    EXPECT_TRUE(r.model.residual_points.empty());
    EXPECT_EQ(r.stop_reason, StopReason::threshold_reached);

    const auto rv = run_piecewise(f, line_grid(), kThree, permissive(), UpdateStrategy::full_revote);
    EXPECT_EQ(rv.model, r.model);
}

TEST(Piecewise, Errors) {
    EllipticCubicFamily f;
    EXPECT_THROW(run_piecewise(f, line_grid(), {}, permissive()), EmptyDataset);
    const GridSpec bad({{"a", 0, 1, 1}, {"b", -2, 1, 5}, {"m", 1, 1, 1}, {"n", 0, 1, 1}}, 0);
    EXPECT_THROW(run_piecewise(f, bad, kThree, permissive()), ConfigError);
    auto c = permissive();
    c.threshold_frac = 1.5;
    EXPECT_THROW(run_piecewise(f, line_grid(), kThree, c), ConfigError);
}

TEST(Piecewise, StopsOnNoVotes) {
    EllipticCubicFamily f;
    const std::vector<ImagePoint> far{{2, 1}, {3, 0}};
    const auto r = run_piecewise(f, line_grid(), far, permissive());
    EXPECT_EQ(r.stop_reason, StopReason::no_votes);
    EXPECT_TRUE(r.model.segments.empty());
    EXPECT_EQ(r.model.residual_points, (std::vector<PointId>{0, 1}));
}

TEST(Piecewise, StopsBelowMinVotes) {
    EllipticCubicFamily f;
    auto c = permissive();
    c.min_votes = 2;
    const auto r = run_piecewise(f, line_grid(), kThree, c);
    EXPECT_EQ(r.stop_reason, StopReason::below_min_votes);
    ASSERT_EQ(r.model.segments.size(), 1u);
    EXPECT_EQ(r.model.residual_points, (std::vector<PointId>{1}));
}

TEST(Piecewise, DefaultMinVotes) {
    DetectorConfig c;
    EXPECT_EQ(c.effective_min_votes(100), 5u);
    EXPECT_EQ(c.effective_min_votes(959), 20u);
    c.min_votes = 3;
    EXPECT_EQ(c.effective_min_votes(959), 3u);
}

TEST(Piecewise, SingleCurveFollowsOnePassPeak) {
    EllipticCubicFamily f;
    const auto g = two_arc_grid();
    const ParameterVector l{0.5, -1.0, 1.0, -1.0};
    const auto pts = sample_curve_points(f, l, -1.5, 1.0, 60);
    DetectorConfig c;
    c.neighbor_radius = 0.5;
    const auto r = run_piecewise(f, g, pts, c);
    ASSERT_EQ(r.model.segments.size(), 1u);
    EXPECT_EQ(r.model.segments[0].lambda_star, l);
    EXPECT_GE(r.model.segments[0].supporters.size(), static_cast<std::size_t>(std::ceil(0.65 * pts.size())));

    // Oracle: a single standard pass peaks at the same cell.
    std::vector<PointId> ids(pts.size());
    for (PointId j = 0; j < ids.size(); ++j) ids[j] = j;
    const auto peak = find_max(vote_accumulator(f, g, pts, ids));
    ASSERT_TRUE(peak.has_value());
    EXPECT_EQ(peak->cell, r.model.segments[0].cell.linear);
}

TEST(Piecewise, EveryIterationMatchesFreshRevote) {
    EllipticCubicFamily f;
    const auto g = two_arc_grid();
    const auto data = compose_arcs(f,
                                   {{{0.5, -1.0, 1.0, -1.0}, -1.5, 1.0, 60, Branch::both},
                                    {{-1.0, 0.5, 1.5, 1.5}, 1.6, 3.0, 40, Branch::both}},
                                   30, -2, 4, -4, 4, 42);
    DetectorConfig c;
    c.neighbor_radius = 0.5;
    c.min_votes = 10;
    std::size_t checked = 0;
    auto observer = [&](const IterationView& v) {
        const auto ids = v.layers.active_ids();
        EXPECT_EQ(v.counts, vote_accumulator(f, g, data.points, ids)) << "iteration " << v.iteration;
        EXPECT_EQ(v.counts, collapse(v.layers));
        ++checked;
    };
    const auto a = run_piecewise(f, g, data.points, c, UpdateStrategy::layered_subtraction, observer);
    const auto b = run_piecewise(f, g, data.points, c, UpdateStrategy::full_revote);
    EXPECT_GE(checked, 2u);
    EXPECT_EQ(a.model, b.model);
    EXPECT_EQ(a.stop_reason, b.stop_reason);

    std::set<PointId> seen;
    for (const auto& s : a.model.segments)
        for (PointId j : s.supporters) EXPECT_TRUE(seen.insert(j).second) << "shared supporter " << j;
}

TEST(Connectivity, ChainIsOneComponent) {
    std::vector<ImagePoint> chain;
    for (int i = 0; i < 10; ++i) chain.push_back({static_cast<double>(i), 0.0});
    DetectorConfig c;
    c.neighbor_radius = 1.5;
    c.min_component_size = 2;
    std::vector<PointId> all(chain.size());
    for (PointId j = 0; j < all.size(); ++j) all[j] = j;
    const auto split = connectivity_filter(chain, all, c);
    EXPECT_EQ(split.kept, all);
    EXPECT_TRUE(split.returned.empty());
}

TEST(Connectivity, SmallClusterReturned) {
    std::vector<ImagePoint> pts;
    for (int i = 0; i < 5; ++i) pts.push_back({0.1 * i, 0.0});
    for (int i = 0; i < 2; ++i) pts.push_back({100.0 + 0.1 * i, 0.0});
    DetectorConfig c;
    c.neighbor_radius = 0.5;
    c.min_component_size = 3;
    const std::vector<PointId> ids{6, 5, 4, 3, 2, 1, 0};
    const auto split = connectivity_filter(pts, ids, c);
    EXPECT_EQ(split.kept, (std::vector<PointId>{0, 1, 2, 3, 4}));
    EXPECT_EQ(split.returned, (std::vector<PointId>{5, 6}));
}

TEST(Connectivity, MatchesAllPairsOracle) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0, 20);
    for (int t = 0; t < 30; ++t) {
        std::vector<ImagePoint> pts(150);
        for (auto& p : pts) p = {u(rng), u(rng)};
        DetectorConfig c;
        c.neighbor_radius = 0.5 + 0.1 * t;
        c.min_component_size = 1 + t % 6;
        std::vector<PointId> ids;
        std::vector<ImagePoint> sub;
        for (PointId j = 0; j < pts.size(); ++j)
            if (j % 3 != 0) {
                ids.push_back(j);
                sub.push_back(pts[j]);
            }
        const auto label = oracle::components(sub, c.neighbor_radius);
        std::vector<std::size_t> size(sub.size(), 0);
        for (int l : label) ++size[static_cast<std::size_t>(l)];
        std::vector<PointId> expect_kept, expect_returned;
        for (std::size_t i = 0; i < ids.size(); ++i)
            (size[static_cast<std::size_t>(label[i])] >= c.min_component_size ? expect_kept : expect_returned)
                .push_back(ids[i]);
        const auto split = connectivity_filter(pts, ids, c);
        EXPECT_EQ(split.kept, expect_kept) << t;
        EXPECT_EQ(split.returned, expect_returned) << t;
    }
}

TEST(Stitch, EmptyAndSingle) {
    std::vector<ImagePoint> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({std::cos(i * std::numbers::pi / 4), std::sin(i * std::numbers::pi / 4)});
    DetectorConfig c;
    const auto empty = stitch(pts, {}, c);
    EXPECT_TRUE(empty.segments.empty());
    EXPECT_EQ(empty.residual_points.size(), 8u);

    const auto closed = stitch(pts, {segment_of({0, 1, 2, 3, 4, 5, 6, 7})}, c);
    ASSERT_EQ(closed.segments.size(), 1u);
    EXPECT_TRUE(closed.closed);
    EXPECT_EQ(closed.junctions.size(), 1u);

    c.topology = ProfileTopology::open;
    const auto open = stitch(pts, {segment_of({0, 1})}, c);
    EXPECT_FALSE(open.closed);
    EXPECT_TRUE(open.junctions.empty());
    EXPECT_EQ(open.residual_points, (std::vector<PointId>{2, 3, 4, 5, 6, 7}));

    // Without an explicit topology a quarter-turn opening is already open.
    c.topology = ProfileTopology::automatic;
    EXPECT_FALSE(stitch(pts, {segment_of({0, 2, 4, 6})}, c).closed);
}

TEST(Stitch, TouchingSegmentsJoinAtSharedPoint) {
    // Two arcs of a half circle meeting at the top; the duplicated point is
    // the shared boundary.
    std::vector<ImagePoint> pts;
    std::vector<PointId> left, right;
    for (int i = 0; i <= 10; ++i) {
        const double t = std::numbers::pi / 2 * i / 10.0;
        right.push_back(static_cast<PointId>(pts.size()));
        pts.push_back({std::cos(t), std::sin(t)});
    }
    for (int i = 0; i <= 10; ++i) {
        const double t = std::numbers::pi / 2 + std::numbers::pi / 2 * i / 10.0;
        left.push_back(static_cast<PointId>(pts.size()));
        pts.push_back({std::cos(t), std::sin(t)});
    }
    DetectorConfig c;
    c.neighbor_radius = 0.2;
    const auto m = stitch(pts, {segment_of(left), segment_of(right)}, c);
    ASSERT_EQ(m.segments.size(), 2u);
    EXPECT_FALSE(m.closed);
    ASSERT_EQ(m.junctions.size(), 1u);
    EXPECT_LE(std::hypot(m.junctions[0].x - 0.0, m.junctions[0].y - 1.0), c.neighbor_radius);
    EXPECT_EQ(m.segments[0].supporters, right);
}

TEST(Stitch, OvalQuartersInCounterClockwiseOrder) {
    std::vector<ImagePoint> pts;
    std::vector<std::vector<PointId>> quarters(4);
    for (int i = 0; i < 200; ++i) {
        const double t = 2 * std::numbers::pi * (i + 0.5) / 200.0;
        quarters[static_cast<std::size_t>(i / 50)].push_back(static_cast<PointId>(pts.size()));
        pts.push_back({3.0 + 2.0 * std::cos(t), -1.0 + 1.2 * std::sin(t)});
    }
    DetectorConfig c;
    c.neighbor_radius = 0.2;
    const auto m = stitch(pts, {segment_of(quarters[2]), segment_of(quarters[0]), segment_of(quarters[3]),
                                segment_of(quarters[1])},
                          c);
    ASSERT_EQ(m.segments.size(), 4u);
    EXPECT_TRUE(m.closed);
    EXPECT_EQ(m.junctions.size(), 4u);
    for (std::size_t q = 0; q < 4; ++q) EXPECT_EQ(m.segments[q].supporters, quarters[q]) << q;
    for (const auto& j : m.junctions) {
        const double r = std::hypot((j.x - 3.0) / 2.0, (j.y + 1.0) / 1.2);
        EXPECT_NEAR(r, 1.0, 0.01);
    }
}

TEST(Stitch, RejectsSharedSupporters) {
    const std::vector<ImagePoint> pts{{1, 0}, {0, 1}, {-1, 0}};
    EXPECT_THROW(stitch(pts, {segment_of({0, 1}), segment_of({1, 2})}, DetectorConfig{}), InvalidInput);
}
