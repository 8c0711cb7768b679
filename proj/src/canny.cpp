#include "phough/error.hpp"
#include "phough/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace phough {

namespace {

/// Mirror an index into [0, n): ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
std::ptrdiff_t mirror(std::ptrdiff_t i, std::ptrdiff_t n) {
    if (n == 1) return 0;
    const std::ptrdiff_t period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

struct FloatImage {
    std::size_t width = 0, height = 0;
    std::vector<double> v;

    double at(std::ptrdiff_t x, std::ptrdiff_t y) const {
        const auto w = static_cast<std::ptrdiff_t>(width), h = static_cast<std::ptrdiff_t>(height);
        return v[static_cast<std::size_t>(mirror(y, h) * w + mirror(x, w))];
    }
};

std::vector<double> gaussian_kernel(double sigma) {
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> k(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-(i * i) / (2.0 * sigma * sigma));
        k[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : k) w /= sum;
    return k;
}

FloatImage smooth(const GrayImage& img, double sigma) {
    const auto kernel = gaussian_kernel(sigma);
    const auto radius = static_cast<std::ptrdiff_t>(kernel.size() / 2);
    FloatImage src{img.width, img.height, std::vector<double>(img.pixels.begin(), img.pixels.end())};
    FloatImage tmp{img.width, img.height, std::vector<double>(src.v.size())};
    FloatImage out = tmp;
    const auto w = static_cast<std::ptrdiff_t>(img.width), h = static_cast<std::ptrdiff_t>(img.height);

    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double s = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i) s += kernel[static_cast<std::size_t>(i + radius)] * src.at(x + i, y);
            tmp.v[static_cast<std::size_t>(y * w + x)] = s;
        }
    }
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            double s = 0.0;
            for (std::ptrdiff_t i = -radius; i <= radius; ++i) s += kernel[static_cast<std::size_t>(i + radius)] * tmp.at(x, y + i);
            out.v[static_cast<std::size_t>(y * w + x)] = s;
        }
    }
    return out;
}

}  // namespace

GrayImage crop(const GrayImage& img, std::size_t x0, std::size_t y0, std::size_t w, std::size_t h) {
    if (w == 0 || h == 0 || x0 + w > img.width || y0 + h > img.height) {
        throw InvalidImage("crop window leaves the image");
    }
    GrayImage out(w, h);
    for (std::size_t y = 0; y < h; ++y) {
        for (std::size_t x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
    }
    return out;
}

EdgeMap canny_edges(const GrayImage& img, double sigma, double low_frac, double high_frac) {
    if (img.width == 0 || img.height == 0 || img.width * img.height < 2) {
        throw InvalidImage("image must have at least two pixels");
    }
    if (img.pixels.size() != img.width * img.height) throw InvalidImage("pixel count does not match dimensions");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("sigma must be positive");
    if (!(low_frac > 0.0 && low_frac < high_frac && high_frac <= 1.0)) {
        throw InvalidInput("thresholds must satisfy 0 < low < high <= 1");
    }

    const FloatImage s = smooth(img, sigma);
    const auto w = static_cast<std::ptrdiff_t>(img.width), h = static_cast<std::ptrdiff_t>(img.height);
    const auto idx = [w](std::ptrdiff_t x, std::ptrdiff_t y) { return static_cast<std::size_t>(y * w + x); };

    std::vector<double> mag(s.v.size()), gx(s.v.size()), gy(s.v.size());
    double max_mag = 0.0;
    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            const double dx = (s.at(x + 1, y - 1) + 2.0 * s.at(x + 1, y) + s.at(x + 1, y + 1)) -
                              (s.at(x - 1, y - 1) + 2.0 * s.at(x - 1, y) + s.at(x - 1, y + 1));
            const double dy = (s.at(x - 1, y + 1) + 2.0 * s.at(x, y + 1) + s.at(x + 1, y + 1)) -
                              (s.at(x - 1, y - 1) + 2.0 * s.at(x, y - 1) + s.at(x + 1, y - 1));
            const auto i = idx(x, y);
            gx[i] = dx;
            gy[i] = dy;
            mag[i] = std::hypot(dx, dy);
            max_mag = std::max(max_mag, mag[i]);
        }
    }
    EdgeMap edges;
    if (max_mag <= 0.0) return edges;

    // Quantize the gradient direction and compare along it. A pixel must beat
    // its neighbour on the negative side strictly and tie-or-beat the positive
    // side, so a plateau of two equal maxima yields one edge pixel.
    auto mag_at = [&](std::ptrdiff_t x, std::ptrdiff_t y) {
        if (x < 0 || y < 0 || x >= w || y >= h) return 0.0;
        return mag[idx(x, y)];
    };
    std::vector<std::uint8_t> thin(mag.size(), 0);  // 0 none, 1 weak, 2 strong
    const double high = high_frac * max_mag;
    const double low = low_frac * max_mag;
    for (std::ptrdiff_t y = 1; y + 1 < h; ++y) {
        for (std::ptrdiff_t x = 1; x + 1 < w; ++x) {
            const auto i = idx(x, y);
            const double m = mag[i];
            if (m < low || m <= 0.0) continue;
            double deg = std::atan2(gy[i], gx[i]) * 180.0 / std::numbers::pi;
            if (deg < 0.0) deg += 180.0;
            std::ptrdiff_t px, py;  // positive-side offset
            if (deg < 22.5 || deg >= 157.5) {
                px = 1, py = 0;
            } else if (deg < 67.5) {
                px = 1, py = 1;
            } else if (deg < 112.5) {
                px = 0, py = 1;
            } else {
                px = -1, py = 1;
            }
            if (m > mag_at(x - px, y - py) && m >= mag_at(x + px, y + py)) thin[i] = m >= high ? 2 : 1;
        }
    }

    std::vector<std::size_t> stack;
    std::vector<std::uint8_t> keep(mag.size(), 0);
    for (std::size_t i = 0; i < thin.size(); ++i) {
        if (thin[i] == 2) {
            keep[i] = 1;
            stack.push_back(i);
        }
    }
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        const auto x = static_cast<std::ptrdiff_t>(i) % w, y = static_cast<std::ptrdiff_t>(i) / w;
        for (std::ptrdiff_t dy = -1; dy <= 1; ++dy) {
            for (std::ptrdiff_t dx = -1; dx <= 1; ++dx) {
                const std::ptrdiff_t nx = x + dx, ny = y + dy;
                if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                const auto j = idx(nx, ny);
                if (thin[j] && !keep[j]) {
                    keep[j] = 1;
                    stack.push_back(j);
                }
            }
        }
    }

    for (std::ptrdiff_t y = 0; y < h; ++y) {
        for (std::ptrdiff_t x = 0; x < w; ++x) {
            if (keep[idx(x, y)]) edges.points.push_back({static_cast<double>(x), static_cast<double>(y)});
        }
    }
    return edges;
}

}  // namespace phough
