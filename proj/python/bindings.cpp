#include "phough/bench.hpp"
#include "phough/error.hpp"
#include "phough/io.hpp"
#include "phough/piecewise.hpp"
#include "phough/preprocess.hpp"
#include "phough/render.hpp"
#include "phough/synthetic.hpp"
#include "phough/voting.hpp"

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace phough;

namespace {

using PointArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

std::vector<ImagePoint> to_points(const PointArray& arr) {
    if (arr.ndim() != 2 || arr.shape(1) != 2) throw InvalidInput("points must have shape (n, 2)");
    const auto v = arr.unchecked<2>();
    std::vector<ImagePoint> pts(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i) pts[static_cast<std::size_t>(i)] = {v(i, 0), v(i, 1)};
    return pts;
}

py::array_t<double> from_points(const std::vector<ImagePoint>& pts) {
    py::array_t<double> out({static_cast<py::ssize_t>(pts.size()), py::ssize_t{2}});
    auto v = out.mutable_unchecked<2>();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        v(static_cast<py::ssize_t>(i), 0) = pts[i].x;
        v(static_cast<py::ssize_t>(i), 1) = pts[i].y;
    }
    return out;
}

GrayImage to_image(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw InvalidImage("image must be a 2-D uint8 array");
    GrayImage img(static_cast<std::size_t>(arr.shape(1)), static_cast<std::size_t>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + arr.size(), img.pixels.begin());
    return img;
}

// JSON crosses the boundary as text; the Python side wraps it with json.loads/dumps.
GridSpec grid_of(const std::string& text) { return grid_from_json(nlohmann::json::parse(text)); }
DetectorConfig config_of(const std::string& text) {
    return text.empty() ? DetectorConfig{} : config_from_json(nlohmann::json::parse(text));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Piecewise Hough transform for elliptic cubic curves";

    py::register_exception<Error>(m, "PhoughError", PyExc_ValueError);

    m.def("curve_residual", [](std::vector<double> lambda, double x, double y) {
        return curve_residual(EllipticCubicFamily{}, ParameterVector(std::move(lambda)), {x, y});
    }, py::arg("params"), py::arg("x"), py::arg("y"));

    m.def("same_curve", [](std::vector<double> a, std::vector<double> b) {
        return check_regularity_pair(EllipticCubicFamily{}, ParameterVector(std::move(a)), ParameterVector(std::move(b))) ==
               CurveRelation::same_curve;
    }, py::arg("params"), py::arg("other"));

    m.def("sample_curve", [](std::vector<double> lambda, double x_lo, double x_hi, std::size_t count) {
        return from_points(sample_curve_points(EllipticCubicFamily{}, ParameterVector(std::move(lambda)), x_lo, x_hi, count));
    }, py::arg("params"), py::arg("x_lo"), py::arg("x_hi"), py::arg("count"));

    m.def("vote_counts", [](const PointArray& points, const std::string& grid) {
        const auto g = grid_of(grid);
        const auto h = collapse(build_layered(EllipticCubicFamily{}, g, to_points(points)));
        py::array_t<std::uint32_t> out(static_cast<py::ssize_t>(h.size()));
        std::copy(h.counts().begin(), h.counts().end(), out.mutable_data());
        return out;
    }, py::arg("points"), py::arg("grid_json"), "Dense accumulator, one count per cell in row-major order.");

    m.def("detect", [](const PointArray& points, const std::string& grid, const std::string& config,
                       const std::string& strategy) {
        const auto g = grid_of(grid);
        const auto c = config_of(config);
        const auto pts = to_points(points);
        DetectionResult r;
        {
            py::gil_scoped_release release;
            r = run_piecewise(EllipticCubicFamily{}, g, pts, c, strategy_from_string(strategy));
        }
        return dump_json(result_to_json({"elliptic", g, c, r.model, r.stop_reason, pts.size(), std::nullopt}));
    }, py::arg("points"), py::arg("grid_json"), py::arg("config_json") = "", py::arg("strategy") = "subtraction");

    m.def("bench", [](const PointArray& points, const std::string& grid, const std::string& config) {
        const auto g = grid_of(grid);
        const auto pts = to_points(points);
        const auto report = bench_revote(EllipticCubicFamily{}, g, pts, config_of(config));
        return dump_json(bench_to_json(report));
    }, py::arg("points"), py::arg("grid_json"), py::arg("config_json") = "");

    m.def("render", [](const PointArray& points, const std::string& result) {
        const auto doc = result_from_json(nlohmann::json::parse(result));
        return render_overlay(*make_family(doc.family), doc.model, to_points(points));
    }, py::arg("points"), py::arg("result_json"));

    m.def("canny_edges", [](const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& image,
                            double sigma, double low, double high) {
        return from_points(canny_edges(to_image(image), sigma, low, high).points);
    }, py::arg("image"), py::arg("sigma") = 1.4, py::arg("low") = 0.1, py::arg("high") = 0.3);

    m.def("concave_hull", [](const PointArray& points, double alpha) {
        return from_points(alpha_concave_hull(to_points(points), alpha));
    }, py::arg("points"), py::arg("alpha") = 0.7853981633974483);

    m.def("load_pgm", [](const std::string& path) {
        const auto img = load_image(path);
        py::array_t<std::uint8_t> out({static_cast<py::ssize_t>(img.height), static_cast<py::ssize_t>(img.width)});
        std::copy(img.pixels.begin(), img.pixels.end(), out.mutable_data());
        return out;
    }, py::arg("path"));

    m.def("vertebra_profile", [](std::size_t count) { return from_points(vertebra_profile(count)); },
          py::arg("count") = 959);
    m.def("profile_grid", [] { return dump_json(grid_to_json(profile_grid())); });
}
