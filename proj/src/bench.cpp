#include "phough/bench.hpp"

#include "phough/error.hpp"

namespace phough {

BenchReport bench_revote(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                         const DetectorConfig& config) {
    BenchReport report;
    report.subtraction = run_piecewise(family, grid, points, config, UpdateStrategy::layered_subtraction);
    const DetectionResult revote = run_piecewise(family, grid, points, config, UpdateStrategy::full_revote);

    report.identical_models = report.subtraction.model == revote.model &&
                              report.subtraction.stop_reason == revote.stop_reason &&
                              report.subtraction.iterations.size() == revote.iterations.size();
    report.initial_votes = report.subtraction.initial_votes;

    const auto& sub = report.subtraction.iterations;
    const auto& rev = revote.iterations;
    for (std::size_t i = 0; i < sub.size() && i < rev.size(); ++i) {
        if (sub[i].cell != rev[i].cell || sub[i].removed != rev[i].removed) report.identical_models = false;
        if (!sub[i].accepted) continue;
        BenchIteration b;
        b.iteration = sub[i].iteration;
        b.removed = sub[i].removed;
        b.survivors = sub[i].active_before - sub[i].removed;
        b.updates_subtraction = sub[i].accumulator_updates;
        b.updates_revote = rev[i].accumulator_updates;
        b.seconds_subtraction = sub[i].update_seconds;
        b.seconds_revote = rev[i].update_seconds;
        report.total_updates_subtraction += b.updates_subtraction;
        report.total_updates_revote += b.updates_revote;
        report.total_seconds_subtraction += b.seconds_subtraction;
        report.total_seconds_revote += b.seconds_revote;
        report.iterations.push_back(b);
    }
    return report;
}

nlohmann::json bench_to_json(const BenchReport& report) {
    nlohmann::json iterations = nlohmann::json::array();
    for (const auto& b : report.iterations) {
        iterations.push_back({{"iteration", b.iteration},
                              {"removed", b.removed},
                              {"survivors", b.survivors},
                              {"updates_subtraction", b.updates_subtraction},
                              {"updates_revote", b.updates_revote},
                              {"seconds_subtraction", b.seconds_subtraction},
                              {"seconds_revote", b.seconds_revote}});
    }
    const double ratio = report.total_updates_revote == 0
                             ? 0.0
                             : static_cast<double>(report.total_updates_subtraction) /
                                   static_cast<double>(report.total_updates_revote);
    return {{"identical_models", report.identical_models},
            {"initial_votes", report.initial_votes},
            {"build_seconds", report.subtraction.build_seconds},
            {"total_updates_subtraction", report.total_updates_subtraction},
            {"total_updates_revote", report.total_updates_revote},
            {"update_ratio", ratio},
            {"total_seconds_subtraction", report.total_seconds_subtraction},
            {"total_seconds_revote", report.total_seconds_revote},
            {"iterations", std::move(iterations)}};
}

}  // namespace phough
