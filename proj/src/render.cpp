#include "phough/render.hpp"

#include "phough/error.hpp"
#include "phough/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <vector>

namespace phough {

namespace {

constexpr const char* kPalette[] = {"#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b",
                                    "#e377c2", "#17becf", "#bcbd22", "#1f77b4", "#7f7f7f"};

std::string num(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

struct Box {
    double x0 = 0, y0 = 0, x1 = 1, y1 = 1;

    void add(ImagePoint p, bool& first) {
        if (first) {
            x0 = x1 = p.x;
            y0 = y1 = p.y;
            first = false;
        } else {
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
    }
};

using Polyline = std::vector<ImagePoint>;

/// Samples one branch (lowest or highest ordinate) over [lo, hi]; breaks the
/// polyline wherever the curve has no real point.
std::vector<Polyline> sample_branch(const CurveFamily& family, const ParameterVector& lambda, Interval iv, bool upper,
                                    std::size_t samples) {
    std::vector<Polyline> lines;
    Polyline current;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? iv.hi
                                          : iv.lo + (iv.hi - iv.lo) * static_cast<double>(i) /
                                                        static_cast<double>(samples - 1);
        const auto ys = family.ordinates_at(lambda, x);
        if (ys.empty()) {
            if (current.size() >= 2) lines.push_back(std::move(current));
            current.clear();
            continue;
        }
        current.push_back({x, upper ? ys.back() : ys.front()});
    }
    if (current.size() >= 2) lines.push_back(std::move(current));
    return lines;
}

}  // namespace

std::string render_overlay(const CurveFamily& family, const PiecewiseModel& model, std::span<const ImagePoint> points,
                           const RenderOptions& options) {
    const std::size_t samples = std::max<std::size_t>(100, options.samples);

    struct Drawn {
        std::vector<Polyline> lines;
    };
    std::vector<Drawn> drawn;
    for (const auto& seg : model.segments) {
        Drawn d;
        if (family.domain_check(seg.lambda_star)) {
            for (bool upper : {false, true}) {
                const auto& iv = upper ? seg.span.upper : seg.span.lower;
                if (!iv) continue;
                const Interval widened{iv->lo - options.margin, iv->hi + options.margin};
                for (auto& l : sample_branch(family, seg.lambda_star, widened, upper, samples)) d.lines.push_back(std::move(l));
            }
        }
        drawn.push_back(std::move(d));
    }

    bool first = true;
    Box box;
    for (const auto& p : points) box.add(p, first);
    for (const auto& d : drawn) {
        for (const auto& l : d.lines) {
            for (const auto& p : l) box.add(p, first);
        }
    }
    for (const auto& j : model.junctions) box.add(j, first);
    const double side = std::max({box.x1 - box.x0, box.y1 - box.y0, 1e-9});
    const double pad = 0.05 * side;
    const double r = options.point_radius_frac * side;

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(box.x0 - pad) + " " + num(box.y0 - pad) + " " +
           num(box.x1 - box.x0 + 2 * pad) + " " + num(box.y1 - box.y0 + 2 * pad) + "\" width=\"800\" height=\"" +
           num(std::round(800.0 * (box.y1 - box.y0 + 2 * pad) / (box.x1 - box.x0 + 2 * pad))) + "\">\n";
    svg += "<g class=\"points\" fill=\"#1f3fbf\">\n";
    for (const auto& p : points) {
        svg += "<circle class=\"point\" cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" + num(r) + "\"/>\n";
    }
    svg += "</g>\n";

    for (std::size_t i = 0; i < drawn.size(); ++i) {
        const char* color = kPalette[i % std::size(kPalette)];
        svg += "<g class=\"segment\" id=\"segment-" + std::to_string(i) + "\" stroke=\"" + color +
               "\" fill=\"none\" stroke-width=\"" + num(1.5 * r) + "\">\n";
        for (const auto& line : drawn[i].lines) {
            svg += "<polyline class=\"curve\" points=\"";
            for (std::size_t k = 0; k < line.size(); ++k) {
                if (k) svg += ' ';
                svg += num(line[k].x) + "," + num(line[k].y);
            }
            svg += "\"/>\n";
        }
        svg += "</g>\n";
    }

    svg += "<g class=\"junctions\" fill=\"#00b050\">\n";
    for (const auto& j : model.junctions) {
        svg += "<circle class=\"junction\" cx=\"" + num(j.x) + "\" cy=\"" + num(j.y) + "\" r=\"" + num(2.5 * r) + "\"/>\n";
    }
    svg += "</g>\n";

    svg += "<g class=\"legend\" font-family=\"monospace\" font-size=\"" + num(3 * r) + "\">\n";
    for (std::size_t i = 0; i < model.segments.size(); ++i) {
        const auto& seg = model.segments[i];
        std::string label = std::to_string(i) + ": (";
        for (std::size_t k = 0; k < seg.lambda_star.size(); ++k) {
            if (k) label += ", ";
            label += num(seg.lambda_star[k]);
        }
        label += ") votes=" + std::to_string(seg.vote_count);
        svg += "<text x=\"" + num(box.x0 - pad + r) + "\" y=\"" + num(box.y0 - pad + (4.0 * r) * static_cast<double>(i + 1)) +
               "\" fill=\"" + kPalette[i % std::size(kPalette)] + "\">" + label + "</text>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

void render_overlay_file(const CurveFamily& family, const PiecewiseModel& model, std::span<const ImagePoint> points,
                         const std::filesystem::path& out_path, const RenderOptions& options) {
    write_text(out_path, render_overlay(family, model, points, options));
}

}  // namespace phough
