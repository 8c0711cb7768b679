#pragma once

#include "phough/piecewise.hpp"

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

namespace phough {

struct BenchIteration {
    std::size_t iteration = 0;
    std::size_t removed = 0;
    std::size_t survivors = 0;
    std::uint64_t updates_subtraction = 0;
    std::uint64_t updates_revote = 0;
    double seconds_subtraction = 0.0;
    double seconds_revote = 0.0;
};

struct BenchReport {
    std::vector<BenchIteration> iterations;  // accepted iterations only
    std::uint64_t total_updates_subtraction = 0;
    std::uint64_t total_updates_revote = 0;
    double total_seconds_subtraction = 0.0;
    double total_seconds_revote = 0.0;
    std::uint64_t initial_votes = 0;
    bool identical_models = false;
    DetectionResult subtraction;  // the layered run, kept for reporting
};

/// Runs the detector once per update strategy and compares the cost of
/// bringing the accumulator up to date after each removal.
BenchReport bench_revote(const CurveFamily& family, const GridSpec& grid, std::span<const ImagePoint> points,
                         const DetectorConfig& config);

nlohmann::json bench_to_json(const BenchReport& report);

}  // namespace phough
