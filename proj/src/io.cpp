#include "phough/io.hpp"

#include "phough/error.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace phough {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Files

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

// ---------------------------------------------------------------------------
// PGM

namespace {

class HeaderReader {
public:
    explicit HeaderReader(std::string_view bytes) : bytes_(bytes) {}

    std::size_t pos() const { return pos_; }

    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    unsigned long number(const char* what) {
        skip_space_and_comments();
        const std::size_t start = pos_;
        if (pos_ >= bytes_.size()) throw FormatError(std::string("unexpected end of file reading ") + what, pos_);
        unsigned long value = 0;
        const auto [ptr, ec] = std::from_chars(bytes_.data() + pos_, bytes_.data() + bytes_.size(), value);
        if (ec != std::errc() || ptr == bytes_.data() + pos_) {
            throw FormatError(std::string("expected an unsigned integer for ") + what, start);
        }
        pos_ = static_cast<std::size_t>(ptr - bytes_.data());
        return value;
    }

    /// Consumes the single whitespace byte that ends a P5 header.
    void single_space() {
        if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
            throw FormatError("expected whitespace after maxval", pos_);
        }
        ++pos_;
    }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

GrayImage parse_pgm(std::string_view bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
        throw FormatError("not a P2/P5 PGM file", 0);
    }
    const bool plain = bytes[1] == '2';
    HeaderReader r(bytes.substr(2));
    const auto offset = [&r] { return r.pos() + 2; };

    const unsigned long width = r.number("width");
    const unsigned long height = r.number("height");
    const std::size_t maxval_at = offset();
    const unsigned long maxval = r.number("maxval");
    if (width == 0 || height == 0) throw FormatError("image has zero width or height", maxval_at);
    if (maxval == 0 || maxval > 255) {
        throw FormatError("unsupported maxval " + std::to_string(maxval) + " (only 8-bit PGM)", maxval_at);
    }

    GrayImage img(width, height);
    const std::size_t n = img.pixels.size();
    if (plain) {
        for (std::size_t i = 0; i < n; ++i) {
            r.skip_space_and_comments();
            if (offset() >= bytes.size()) {
                throw FormatError("truncated pixel data: expected " + std::to_string(n) + " samples, got " +
                                      std::to_string(i),
                                  offset());
            }
            const std::size_t at = offset();
            const unsigned long v = r.number("pixel");
            if (v > maxval) throw FormatError("pixel value exceeds maxval", at);
            img.pixels[i] = static_cast<std::uint8_t>(v);
        }
    } else {
        r.single_space();
        const std::size_t start = offset();
        if (bytes.size() - start < n) {
            throw FormatError("truncated pixel data: expected " + std::to_string(n) + " bytes, got " +
                                  std::to_string(bytes.size() - start),
                              bytes.size());
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto v = static_cast<unsigned char>(bytes[start + i]);
            if (v > maxval) throw FormatError("pixel value exceeds maxval", start + i);
            img.pixels[i] = v;
        }
    }
    return img;
}

GrayImage load_image(const std::filesystem::path& path) { return parse_pgm(read_text(path)); }

std::string format_pgm(const GrayImage& img, bool plain) {
    std::string out = (plain ? "P2\n" : "P5\n") + std::to_string(img.width) + " " + std::to_string(img.height) + "\n255\n";
    if (plain) {
        for (std::size_t y = 0; y < img.height; ++y) {
            for (std::size_t x = 0; x < img.width; ++x) {
                if (x) out += ' ';
                out += std::to_string(img.at(x, y));
            }
            out += '\n';
        }
    } else {
        out.append(img.pixels.begin(), img.pixels.end());
    }
    return out;
}

void save_image(const std::filesystem::path& path, const GrayImage& img) { write_text(path, format_pgm(img)); }

// ---------------------------------------------------------------------------
// CSV points

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_field(std::string_view field, std::size_t line) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
        throw ParseError("invalid number '" + std::string(field) + "'", line);
    }
    return v;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    out.append(buf, ptr);
}

}  // namespace

std::vector<ImagePoint> parse_points_csv(std::string_view text) {
    std::vector<ImagePoint> out;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const std::size_t nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos) throw ParseError("expected 'x,y'", line_no);
        if (line.find(',', comma + 1) != std::string_view::npos) throw ParseError("too many fields", line_no);
        out.push_back({parse_field(line.substr(0, comma), line_no), parse_field(line.substr(comma + 1), line_no)});
    }
    return out;
}

std::vector<ImagePoint> read_points(const std::filesystem::path& path) { return parse_points_csv(read_text(path)); }

std::string format_points_csv(std::span<const ImagePoint> points) {
    std::string out;
    out.reserve(points.size() * 24);
    for (const auto& p : points) {
        append_double(out, p.x);
        out += ',';
        append_double(out, p.y);
        out += '\n';
    }
    return out;
}

void write_points(const std::filesystem::path& path, std::span<const ImagePoint> points) {
    write_text(path, format_points_csv(points));
}

// ---------------------------------------------------------------------------
// JSON documents

std::unique_ptr<CurveFamily> make_family(std::string_view name) {
    if (name == "elliptic") return std::make_unique<EllipticCubicFamily>();
    throw ConfigError("unknown curve family '" + std::string(name) + "'");
}

namespace {

void check_version(const json& doc, const char* what) {
    if (!doc.is_object()) throw ConfigError(std::string(what) + " document must be a JSON object");
    const int v = doc.value("format_version", kFormatVersion);
    if (v != kFormatVersion) {
        throw ConfigError(std::string(what) + " document has format_version " + std::to_string(v) + ", expected " +
                          std::to_string(kFormatVersion));
    }
}

template <typename T>
T field(const json& doc, const char* key) {
    if (!doc.contains(key)) throw ConfigError(std::string("missing field '") + key + "'");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field '") + key + "': " + e.what());
    }
}

json point_json(ImagePoint p) { return json::array({p.x, p.y}); }
ImagePoint point_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }
Interval interval_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }
json optional_interval_json(const std::optional<Interval>& iv) { return iv ? interval_json(*iv) : json(nullptr); }
std::optional<Interval> optional_interval_from(const json& j) {
    if (j.is_null()) return std::nullopt;
    return interval_from(j);
}

}  // namespace

json grid_to_json(const GridSpec& grid) {
    json axes = json::array();
    for (const auto& a : grid.axes()) {
        axes.push_back({{"name", a.name}, {"first_center", a.first_center}, {"spacing", a.spacing}, {"count", a.count}});
    }
    return {{"format_version", kFormatVersion},
            {"axes", std::move(axes)},
            {"dependent_axis", grid.axis(grid.dependent_axis()).name}};
}

GridSpec grid_from_json(const json& doc) {
    check_version(doc, "grid");
    const json& axes_doc = doc.contains("axes") ? doc.at("axes") : throw ConfigError("missing field 'axes'");
    if (!axes_doc.is_array()) throw ConfigError("'axes' must be an array");
    std::vector<AxisSpec> axes;
    for (const auto& a : axes_doc) {
        AxisSpec ax;
        ax.name = field<std::string>(a, "name");
        ax.first_center = field<double>(a, "first_center");
        ax.spacing = field<double>(a, "spacing");
        const auto count = field<long long>(a, "count");
        if (count < 1) throw ConfigError("axis '" + ax.name + "' needs count >= 1");
        ax.count = static_cast<std::size_t>(count);
        axes.push_back(std::move(ax));
    }
    const auto dep = field<std::string>(doc, "dependent_axis");
    for (std::size_t k = 0; k < axes.size(); ++k) {
        if (axes[k].name == dep) return GridSpec(std::move(axes), k);
    }
    throw ConfigError("dependent_axis '" + dep + "' names no axis");
}

json config_to_json(const DetectorConfig& c) {
    return {{"format_version", kFormatVersion},
            {"threshold_frac", c.threshold_frac},
            {"min_votes", c.min_votes ? json(*c.min_votes) : json(nullptr)},
            {"neighbor_radius", c.neighbor_radius},
            {"min_component_size", c.min_component_size},
            {"reinsert_rejected", c.reinsert_rejected},
            {"topology", to_string(c.topology)}};
}

DetectorConfig config_from_json(const json& doc) {
    check_version(doc, "config");
    DetectorConfig c;
    if (doc.contains("threshold_frac")) c.threshold_frac = field<double>(doc, "threshold_frac");
    if (doc.contains("min_votes") && !doc.at("min_votes").is_null()) {
        const auto v = field<long long>(doc, "min_votes");
        if (v < 1) throw ConfigError("min_votes must be at least 1");
        c.min_votes = static_cast<std::uint32_t>(v);
    }
    if (doc.contains("neighbor_radius")) c.neighbor_radius = field<double>(doc, "neighbor_radius");
    if (doc.contains("min_component_size")) {
        const auto v = field<long long>(doc, "min_component_size");
        if (v < 0) throw ConfigError("min_component_size must be non-negative");
        c.min_component_size = static_cast<std::size_t>(v);
    }
    if (doc.contains("reinsert_rejected")) c.reinsert_rejected = field<bool>(doc, "reinsert_rejected");
    if (doc.contains("topology")) c.topology = topology_from_string(field<std::string>(doc, "topology"));
    c.validate();
    return c;
}

json result_to_json(const ResultDocument& doc) {
    json segments = json::array();
    for (const auto& s : doc.model.segments) {
        segments.push_back({
            {"lambda_star", std::vector<double>(s.lambda_star.begin(), s.lambda_star.end())},
            {"cell", s.cell.multi},
            {"cell_linear", s.cell.linear},
            {"vote_count", s.vote_count},
            {"peak_count", s.peak_count},
            {"iteration", s.iteration},
            {"supporters", s.supporters},
            {"span",
             {{"x", interval_json(s.span.x)},
              {"lower", optional_interval_json(s.span.lower)},
              {"upper", optional_interval_json(s.span.upper)},
              {"angle", interval_json(s.span.angle)},
              {"first_endpoint", point_json(s.span.first_endpoint)},
              {"last_endpoint", point_json(s.span.last_endpoint)}}},
        });
    }
    json junctions = json::array();
    for (const auto& j : doc.model.junctions) junctions.push_back(point_json(j));

    json out = {{"format_version", kFormatVersion},
                {"family", doc.family},
                {"grid", grid_to_json(doc.grid)},
                {"config", config_to_json(doc.config)},
                {"point_count", doc.point_count},
                {"stop_reason", to_string(doc.stop_reason)},
                {"closed", doc.model.closed},
                {"segments", std::move(segments)},
                {"junctions", std::move(junctions)},
                {"residual_points", doc.model.residual_points}};
    if (doc.benchmark) out["benchmark"] = *doc.benchmark;
    return out;
}

ResultDocument result_from_json(const json& doc) {
    check_version(doc, "result");
    ResultDocument r;
    try {
        r.family = doc.at("family").get<std::string>();
        r.grid = grid_from_json(doc.at("grid"));
        r.config = config_from_json(doc.at("config"));
        r.point_count = doc.at("point_count").get<std::size_t>();
        r.stop_reason = stop_reason_from_string(doc.at("stop_reason").get<std::string>());
        r.model.closed = doc.at("closed").get<bool>();
        for (const auto& s : doc.at("segments")) {
            DetectedSegment seg;
            seg.lambda_star = ParameterVector(s.at("lambda_star").get<std::vector<double>>());
            seg.cell.multi = s.at("cell").get<std::vector<std::size_t>>();
            seg.cell.linear = s.at("cell_linear").get<CellId>();
            seg.vote_count = s.at("vote_count").get<std::uint32_t>();
            seg.peak_count = s.at("peak_count").get<std::uint32_t>();
            seg.iteration = s.at("iteration").get<std::size_t>();
            seg.supporters = s.at("supporters").get<std::vector<PointId>>();
            const json& sp = s.at("span");
            seg.span.x = interval_from(sp.at("x"));
            seg.span.lower = optional_interval_from(sp.at("lower"));
            seg.span.upper = optional_interval_from(sp.at("upper"));
            seg.span.angle = interval_from(sp.at("angle"));
            seg.span.first_endpoint = point_from(sp.at("first_endpoint"));
            seg.span.last_endpoint = point_from(sp.at("last_endpoint"));
            if (r.grid.linearize(seg.cell.multi) != seg.cell.linear) {
                throw ConfigError("segment cell multi-index and linear index disagree");
            }
            r.model.segments.push_back(std::move(seg));
        }
        for (const auto& j : doc.at("junctions")) r.model.junctions.push_back(point_from(j));
        r.model.residual_points = doc.at("residual_points").get<std::vector<PointId>>();
        if (doc.contains("benchmark")) r.benchmark = doc.at("benchmark");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("malformed result document: ") + e.what());
    }
    return r;
}

json read_json(const std::filesystem::path& path) {
    const std::string text = read_text(path);
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("invalid JSON in '") + path.string() + "': " + e.what(), e.byte);
    }
}

std::string dump_json(const json& doc) { return doc.dump(2) + "\n"; }

void write_json(const std::filesystem::path& path, const json& doc) { write_text(path, dump_json(doc)); }

}  // namespace phough
