#pragma once

#include "phough/curve_family.hpp"
#include "phough/grid.hpp"
#include "phough/piecewise.hpp"
#include "phough/preprocess.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace phough {

inline constexpr int kFormatVersion = 1;

// ---------------------------------------------------------------------------
// PGM (P2 plain and P5 binary, maxval <= 255). Samples are kept as stored,
// not rescaled to 255.

GrayImage parse_pgm(std::string_view bytes);
GrayImage load_image(const std::filesystem::path& path);
/// Writes binary P5.
void save_image(const std::filesystem::path& path, const GrayImage& img);
std::string format_pgm(const GrayImage& img, bool plain = false);

// ---------------------------------------------------------------------------
// Point lists: one "x,y" per line, no header

std::vector<ImagePoint> parse_points_csv(std::string_view text);
std::vector<ImagePoint> read_points(const std::filesystem::path& path);
/// Shortest decimal form that reads back to the same double.
std::string format_points_csv(std::span<const ImagePoint> points);
void write_points(const std::filesystem::path& path, std::span<const ImagePoint> points);

// ---------------------------------------------------------------------------
// Structured documents (JSON)

/// Family lookup by name; only "elliptic" ships with the library.
std::unique_ptr<CurveFamily> make_family(std::string_view name);

nlohmann::json grid_to_json(const GridSpec& grid);
/// Axis `name`s are free labels; `dependent_axis` names one of them.
GridSpec grid_from_json(const nlohmann::json& doc);

nlohmann::json config_to_json(const DetectorConfig& config);
/// Missing fields keep their defaults.
DetectorConfig config_from_json(const nlohmann::json& doc);

/// Everything needed to reproduce or re-render a detection run.
struct ResultDocument {
    std::string family;
    GridSpec grid;
    DetectorConfig config;
    PiecewiseModel model;
    StopReason stop_reason = StopReason::threshold_reached;
    std::size_t point_count = 0;
    std::optional<nlohmann::json> benchmark;

    friend bool operator==(const ResultDocument&, const ResultDocument&) = default;
};

nlohmann::json result_to_json(const ResultDocument& doc);
ResultDocument result_from_json(const nlohmann::json& doc);

nlohmann::json read_json(const std::filesystem::path& path);
/// Two-space indented, trailing newline.
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
std::string dump_json(const nlohmann::json& doc);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace phough
