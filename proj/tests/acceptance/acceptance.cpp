// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "phough/bench.hpp"
#include "phough/io.hpp"
#include "phough/piecewise.hpp"
#include "phough/preprocess.hpp"
#include "phough/synthetic.hpp"
#include "phough/voting.hpp"
#include "../unit/oracles.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <numeric>
#include <random>
#include <set>
#include <string>

using namespace phough;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double limit_seconds, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
    const bool in_time = secs < limit_seconds;
    const bool ok = out.pass && in_time;
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s [%.2fs / limit %.0fs] %s%s\n", ok ? "PASS" : "FAIL", id, title, secs,
                limit_seconds, out.detail.c_str(), in_time ? "" : " (time limit exceeded)");
    std::fflush(stdout);
}

std::vector<PointId> iota_ids(std::size_t n) {
    std::vector<PointId> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    return ids;
}

/// Random elliptic grid with at most max_cells cells and no m = 0 center.
GridSpec random_grid(std::mt19937_64& rng, std::size_t max_cells) {
    std::uniform_int_distribution<std::size_t> cnt(4, 24);
    std::uniform_real_distribution<double> sp(0.05, 0.6);
    while (true) {
        const std::size_t ca = cnt(rng), cb = 2 * cnt(rng), cm = cnt(rng) / 2, cn = cnt(rng);
        if (ca * cb * cm * cn > max_cells) continue;
        const double sm = sp(rng);
        return GridSpec({{"a", -2.0, sp(rng), ca},
                         {"b", -5.0, sp(rng), cb},
                         {"m", sm / 2 - sm * static_cast<double>(cm / 2), sm, cm},
                         {"n", -1.5, sp(rng), cn}},
                        EllipticCubicFamily::kB);
    }
}

std::vector<ImagePoint> random_points(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(-3, 3);
    std::vector<ImagePoint> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

std::string result_text(const GridSpec& g, const DetectorConfig& c, const DetectionResult& r, std::size_t n) {
    return dump_json(result_to_json({"elliptic", g, c, r.model, r.stop_reason, n, std::nullopt}));
}

Outcome collapse_identity() {
    EllipticCubicFamily f;
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<std::size_t> nu(1, 500);
    std::size_t largest = 0;
    for (int t = 0; t < 50; ++t) {
        const auto g = random_grid(rng, 100000);
        largest = std::max(largest, g.cell_count());
        const auto pts = random_points(rng, nu(rng));
        const auto acc = build_layered(f, g, pts);
        if (!(collapse(acc) == vote_accumulator(f, g, pts, iota_ids(pts.size())))) {
            return {false, "instance " + std::to_string(t) + " differs"};
        }
    }
    return {true, "50/50 instances equal, largest grid " + std::to_string(largest) + " cells"};
}

Outcome revote_free_equivalence() {
    EllipticCubicFamily f;
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<std::size_t> nu(2, 500);
    for (int t = 0; t < 50; ++t) {
        const auto g = random_grid(rng, 100000);
        const auto pts = random_points(rng, nu(rng));
        auto acc = build_layered(f, g, pts);
        const auto h = collapse(acc);
        auto order = iota_ids(pts.size());
        std::shuffle(order.begin(), order.end(), rng);
        const auto k = std::uniform_int_distribution<std::size_t>(0, pts.size())(rng);
        std::vector<PointId> removed(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k));
        std::vector<ImagePoint> rest;
        for (auto it = order.begin() + static_cast<std::ptrdiff_t>(k); it != order.end(); ++it) rest.push_back(pts[*it]);
        const auto sub = subtract_layers(acc, h, removed);
        const auto fresh = rest.empty() ? Accumulator(g.cell_count()) : collapse(build_layered(f, g, rest));
        if (!(sub == fresh)) return {false, "subtraction differs on instance " + std::to_string(t)};
    }

    // Whole pipeline, both strategies, compared as serialized documents.
    const auto two = compose_arcs(f,
                                  {{{0.5, -1.0, 1.0, -1.0}, -1.5, 1.0, 100, Branch::upper},
                                   {{-1.0, 0.5, 1.5, 1.5}, 2.0, 3.5, 100, Branch::lower}},
                                  50, -2, 4, -4, 4, 77);
    const GridSpec g2({{"a", -2, 0.5, 9}, {"b", -3, 0.25, 25}, {"m", 0.5, 0.5, 4}, {"n", -2, 0.5, 9}}, 1);
    DetectorConfig c2;
    c2.neighbor_radius = 0.5;
    c2.min_votes = 10;
    const auto profile = vertebra_profile(400);
    DetectorConfig c3;
    c3.neighbor_radius = 0.1;
    std::size_t docs = 0;
    for (const auto& [pts, grid, cfg] : {std::tuple{two.points, g2, c2}, std::tuple{profile, profile_grid(), c3}}) {
        const auto a = run_piecewise(f, grid, pts, cfg, UpdateStrategy::layered_subtraction);
        const auto b = run_piecewise(f, grid, pts, cfg, UpdateStrategy::full_revote);
        if (result_text(grid, cfg, a, pts.size()) != result_text(grid, cfg, b, pts.size())) {
            return {false, "result documents differ for pipeline instance " + std::to_string(docs)};
        }
        ++docs;
    }
    return {true, "50/50 subtraction instances equal; " + std::to_string(docs) + " pipeline documents byte-identical"};
}

Outcome duality_recovery() {
    EllipticCubicFamily f;
    const GridSpec g({{"a", -3, 0.5, 13}, {"b", -4, 0.25, 33}, {"m", -2.25, 0.5, 10}, {"n", -2, 0.5, 9}}, 1);
    std::mt19937_64 rng(3003);
    int recovered = 0;
    for (int t = 0; t < 20; ++t) {
        CellId id;
        ParameterVector l;
        do {
            id = std::uniform_int_distribution<CellId>(0, static_cast<CellId>(g.cell_count() - 1))(rng);
            l = g.center_of(id);
        } while (l[2] == 0.0);
        // Abscissae where the right-hand side is positive: two ordinates each.
        const double u0 = std::max(1.0, std::sqrt((std::abs(l[0]) + std::abs(l[1])) / std::abs(l[2]))) + 0.25;
        const double sign = l[2] > 0 ? 1.0 : -1.0;
        const double x0 = l[3] + sign * u0, x1 = l[3] + sign * (u0 + 2.0);
        const auto pts = sample_curve_points(f, l, std::min(x0, x1), std::max(x0, x1), 100);
        if (pts.size() != 200) return {false, "sampling produced " + std::to_string(pts.size()) + " points"};
        const auto peak = find_max(vote_accumulator(f, g, pts, iota_ids(pts.size())));
        if (peak && peak->cell == id && peak->count == pts.size()) ++recovered;
    }
    return {recovered == 20, std::to_string(recovered) + "/20 generators recovered with count 200"};
}

Outcome piecewise_recovery() {
    EllipticCubicFamily f;
    const ParameterVector l1{0.5, -1.0, 1.0, -1.0}, l2{-1.0, 0.5, 1.5, 1.5};
    const auto data = compose_arcs(f, {{l1, -1.5, 1.0, 100, Branch::upper}, {l2, 2.0, 3.5, 100, Branch::lower}}, 50,
                                   -2, 4, -4, 4, 4004);
    const GridSpec g({{"a", -2, 0.5, 9}, {"b", -3, 0.25, 25}, {"m", 0.5, 0.5, 4}, {"n", -2, 0.5, 9}}, 1);
    DetectorConfig c;
    c.threshold_frac = 0.35;
    c.min_votes = 60;
    c.neighbor_radius = 0.5;
    const auto r = run_piecewise(f, g, data.points, c);
    const auto& segs = r.model.segments;
    std::string detail = std::to_string(segs.size()) + " segments";
    if (segs.size() != 2) return {false, detail};
    bool ok = true;
    for (int arc = 0; arc < 2; ++arc) {
        const auto want = g.cell_of(arc == 0 ? l1 : l2)->linear;
        const auto it = std::find_if(segs.begin(), segs.end(), [&](const auto& s) { return s.cell.linear == want; });
        if (it == segs.end()) {
            ok = false;
            detail += "; arc " + std::to_string(arc) + " cell missing";
            continue;
        }
        std::size_t arc_points = 0, covered = 0;
        const std::set<PointId> sup(it->supporters.begin(), it->supporters.end());
        for (PointId j = 0; j < data.labels.size(); ++j) {
            if (data.labels[j] != arc) continue;
            ++arc_points;
            covered += sup.count(j);
        }
        const double share = static_cast<double>(covered) / static_cast<double>(arc_points);
        ok = ok && share >= 0.95;
        char buf[96];
        std::snprintf(buf, sizeof buf, "; arc %d cell exact, %zu/%zu points supported", arc, covered, arc_points);
        detail += buf;
    }
    return {ok, detail};
}

struct ScaleRun {
    std::vector<ImagePoint> points;
    DetectorConfig config;
    BenchReport report;
    bool docs_identical = false;
};

const ScaleRun& scale_run() {
    static const ScaleRun run = [] {
        ScaleRun s;
        EllipticCubicFamily f;
        s.points = vertebra_profile(959);
        s.config.threshold_frac = 0.35;
        s.config.neighbor_radius = 0.1;
        s.report = bench_revote(f, profile_grid(), s.points, s.config);
        const auto revote = run_piecewise(f, profile_grid(), s.points, s.config, UpdateStrategy::full_revote);
        s.docs_identical = result_text(profile_grid(), s.config, s.report.subtraction, s.points.size()) ==
                           result_text(profile_grid(), s.config, revote, s.points.size());
        return s;
    }();
    return run;
}

Outcome scale_parity() {
    const auto& s = scale_run();
    const auto& r = s.report.subtraction;
    std::set<PointId> covered;
    bool disjoint = true;
    for (const auto& seg : r.model.segments)
        for (PointId j : seg.supporters) disjoint = covered.insert(j).second && disjoint;
    const double share = static_cast<double>(covered.size()) / static_cast<double>(s.points.size());
    const bool guard = r.stop_reason == StopReason::threshold_reached || r.stop_reason == StopReason::below_min_votes;
    const std::size_t n = r.model.segments.size();
    char buf[200];
    std::snprintf(buf, sizeof buf, "nu=%zu N_H=%zu, %zu segments, coverage %zu/%zu (%.1f%%), stop=%s%s",
                  s.points.size(), profile_grid().cell_count(), n, covered.size(), s.points.size(), 100 * share,
                  std::string(to_string(r.stop_reason)).c_str(), disjoint ? "" : ", supporters overlap");
    return {guard && disjoint && n >= 4 && n <= 12 && share >= 0.65, buf};
}

Outcome benchmark_claim() {
    const auto& s = scale_run();
    const double ratio = static_cast<double>(s.report.total_updates_subtraction) /
                         static_cast<double>(std::max<std::uint64_t>(1, s.report.total_updates_revote));
    char buf[200];
    std::snprintf(buf, sizeof buf, "updates subtraction=%llu revote=%llu ratio=%.3f, outputs %s",
                  static_cast<unsigned long long>(s.report.total_updates_subtraction),
                  static_cast<unsigned long long>(s.report.total_updates_revote), ratio,
                  s.report.identical_models && s.docs_identical ? "identical" : "DIFFER");
    return {ratio < 0.5 && s.report.identical_models && s.docs_identical, buf};
}

Outcome regularity() {
    EllipticCubicFamily f;
    std::mt19937_64 rng(7007);
    std::uniform_real_distribution<double> u(-10, 10), mag(0.1, 10);
    std::bernoulli_distribution sign(0.5);
    auto draw = [&] { return ParameterVector{u(rng), u(rng), mag(rng) * (sign(rng) ? 1 : -1), u(rng)}; };
    int distinct = 0, self_same = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto l = draw();
        auto lp = draw();
        if (t % 2 == 1) {  // near misses: one coordinate nudged
            lp = l;
            lp[static_cast<std::size_t>(t / 2) % 4] += 1e-6;
        }
        if (check_regularity_pair(f, l, lp) == CurveRelation::distinct_curves) ++distinct;
        if (check_regularity_pair(f, l, l) == CurveRelation::same_curve) ++self_same;
    }
    return {distinct == 1000 && self_same == 1000,
            std::to_string(distinct) + "/1000 distinct pairs separated, " + std::to_string(self_same) +
                "/1000 identical pairs matched"};
}

Outcome preprocessing() {
    if (!canny_edges(GrayImage(32, 32, 128), 1.4, 0.1, 0.3).points.empty()) return {false, "constant image has edges"};

    GrayImage step(16, 16);
    for (std::size_t y = 0; y < 16; ++y)
        for (std::size_t x = 8; x < 16; ++x) step.at(x, y) = 255;
    const auto edges = canny_edges(step, 1.4, 0.1, 0.3);
    const auto mag = oracle::gradient_magnitude(step, 1.4);
    std::vector<int> per_row(16, 0);
    std::set<double> cols;
    bool at_max = true;
    for (const auto& p : edges.points) {
        const auto y = static_cast<std::size_t>(p.y), x = static_cast<std::size_t>(p.x);
        ++per_row[y];
        cols.insert(p.x);
        const double row_max = *std::max_element(mag.begin() + static_cast<std::ptrdiff_t>(16 * y),
                                                 mag.begin() + static_cast<std::ptrdiff_t>(16 * y + 16));
        at_max = at_max && mag[16 * y + x] >= row_max * (1 - 1e-9);
    }
    bool one_per_row = true;
    for (std::size_t y = 1; y < 15; ++y) one_per_row = one_per_row && per_row[y] == 1;
    if (!(one_per_row && cols.size() == 1 && at_max)) return {false, "step edge not localized at the gradient maximum"};

    std::mt19937_64 rng(8008);
    std::normal_distribution<double> gauss(0, 5);
    const double alpha = std::numbers::pi / 4;
    std::size_t vertices = 0;
    for (int t = 0; t < 100; ++t) {
        std::vector<ImagePoint> pts(30 + 3 * static_cast<std::size_t>(t));
        for (auto& p : pts) p = {std::round(gauss(rng) * 10) / 10, std::round(gauss(rng) * 10) / 10};
        const auto h = alpha_concave_hull(pts, alpha);
        vertices += h.size();
        if (!oracle::is_simple(h) || oracle::signed_area(h) <= 0) return {false, "cloud " + std::to_string(t) + " not simple CCW"};
        for (const auto& p : pts)
            if (!oracle::encloses(h, p)) return {false, "cloud " + std::to_string(t) + " leaves a point outside"};
        for (std::size_t i = 0; i < h.size(); ++i)
            if (oracle::interior_angle_at(h, i) > std::numbers::pi + alpha + 1e-9)
                return {false, "cloud " + std::to_string(t) + " violates the angle bound"};
    }
    return {true, "constant image empty, step edge at gradient maximum, 100 hulls valid (" + std::to_string(vertices) +
                      " vertices)"};
}

}  // namespace

int main() {
    run(1, "collapse equals one-pass voting", 60, collapse_identity);
    run(2, "subtraction equals re-voting", 60, revote_free_equivalence);
    run(3, "on-curve points peak at their generator", 30, duality_recovery);
    run(4, "two arcs in noise recovered", 120, piecewise_recovery);
    run(5, "scale-matched profile detection", 600, scale_parity);
    run(6, "layered subtraction below half the re-vote updates", 600, benchmark_claim);
    run(7, "distinct parameters give distinct curves", 5, regularity);
    run(8, "edge detection and concave hull properties", 60, preprocessing);
    std::printf("%s: %d of 8 criteria failed\n", failures ? "FAIL" : "PASS", failures);
    return failures ? 1 : 0;
}
