#include "phough/error.hpp"
#include "phough/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <queue>
#include <tuple>
#include <vector>

namespace phough {

namespace {

double cross(ImagePoint o, ImagePoint a, ImagePoint b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

double dist2(ImagePoint a, ImagePoint b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return dx * dx + dy * dy;
}

/// Orientation with a tolerance scaled to the operands.
int orient(ImagePoint o, ImagePoint a, ImagePoint b) {
    const double c = cross(o, a, b);
    const double tol = 1e-12 * (dist2(o, a) + dist2(o, b));
    if (c > tol) return 1;
    if (c < -tol) return -1;
    return 0;
}

bool on_closed_segment(ImagePoint a, ImagePoint b, ImagePoint q) {
    if (orient(a, b, q) != 0) return false;
    return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= q.y &&
           q.y <= std::max(a.y, b.y);
}

bool segments_intersect(ImagePoint p1, ImagePoint p2, ImagePoint q1, ImagePoint q2) {
    const int d1 = orient(q1, q2, p1), d2 = orient(q1, q2, p2);
    const int d3 = orient(p1, p2, q1), d4 = orient(p1, p2, q2);
    if (d1 * d2 < 0 && d3 * d4 < 0) return true;
    return (d1 == 0 && on_closed_segment(q1, q2, p1)) || (d2 == 0 && on_closed_segment(q1, q2, p2)) ||
           (d3 == 0 && on_closed_segment(p1, p2, q1)) || (d4 == 0 && on_closed_segment(p1, p2, q2));
}

/// Strict convex hull (no collinear vertices), counter-clockwise.
std::vector<std::size_t> convex_hull(const std::vector<ImagePoint>& pts) {
    std::vector<std::size_t> order(pts.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(pts[a].x, pts[a].y) < std::tie(pts[b].x, pts[b].y);
    });
    std::vector<std::size_t> hull(2 * order.size());
    std::size_t k = 0;
    for (std::size_t i : order) {
        while (k >= 2 && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
        hull[k++] = i;
    }
    for (std::size_t t = order.size() - 1, lower = k + 1; t-- > 0;) {
        const std::size_t i = order[t];
        while (k >= lower && cross(pts[hull[k - 2]], pts[hull[k - 1]], pts[i]) <= 0) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1);
    return hull;
}

/// Polygon as a cyclic doubly linked list over point indices.
class Ring {
public:
    Ring(std::size_t n, const std::vector<std::size_t>& cycle)
        : next_(n, kNone), prev_(n, kNone) {
        for (std::size_t i = 0; i < cycle.size(); ++i) {
            next_[cycle[i]] = cycle[(i + 1) % cycle.size()];
            prev_[cycle[(i + 1) % cycle.size()]] = cycle[i];
        }
        size_ = cycle.size();
        head_ = cycle.front();
    }

    bool contains(std::size_t v) const { return next_[v] != kNone; }
    std::size_t next(std::size_t v) const { return next_[v]; }
    std::size_t prev(std::size_t v) const { return prev_[v]; }
    std::size_t size() const { return size_; }
    std::size_t head() const { return head_; }

    void insert_after(std::size_t a, std::size_t v) {
        const std::size_t b = next_[a];
        next_[a] = v;
        prev_[v] = a;
        next_[v] = b;
        prev_[b] = v;
        ++size_;
    }

    static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

private:
    std::vector<std::size_t> next_, prev_;
    std::size_t size_ = 0;
    std::size_t head_ = 0;
};

class HullRefiner {
public:
    HullRefiner(std::vector<ImagePoint> pts, double alpha)
        : pts_(std::move(pts)), max_angle_(std::numbers::pi + alpha + 1e-12),
          lens_(std::tan(alpha / 2.0) / 2.0), ring_(pts_.size(), convex_hull(pts_)) {}

    std::vector<ImagePoint> run() {
        // Boundary points of the convex hull become vertices straight away.
        std::vector<std::size_t> start;
        for (std::size_t v = ring_.head(), n = 0; n < ring_.size(); ++n, v = ring_.next(v)) start.push_back(v);
        for (std::size_t v : start) absorb_collinear(v, ring_.next(v));

        bool changed = true;
        while (changed) {
            changed = false;
            using Item = std::tuple<double, std::size_t, std::size_t>;
            std::priority_queue<Item> queue;
            for (std::size_t v = ring_.head(), n = 0; n < ring_.size(); ++n, v = ring_.next(v)) {
                queue.emplace(dist2(pts_[v], pts_[ring_.next(v)]), v, ring_.next(v));
            }
            while (!queue.empty()) {
                const auto [len, a, b] = queue.top();
                queue.pop();
                if (ring_.next(a) != b) continue;  // edge already split
                const std::vector<std::size_t> chain = find_split(a, b);
                if (chain.empty()) continue;
                std::size_t at = a;
                for (std::size_t p : chain) {
                    ring_.insert_after(at, p);
                    at = p;
                }
                for (std::size_t u = a; u != b;) {
                    const std::size_t next = ring_.next(u);
                    absorb_collinear(u, next);
                    u = next;
                }
                for (std::size_t u = a; u != b; u = ring_.next(u)) queue.emplace(dist2(pts_[u], pts_[ring_.next(u)]), u, ring_.next(u));
                changed = true;
            }
        }

        // Emit counter-clockwise from the lowest, then leftmost, vertex.
        std::size_t first = ring_.head();
        for (std::size_t v = ring_.head(), n = 0; n < ring_.size(); ++n, v = ring_.next(v)) {
            if (std::tie(pts_[v].y, pts_[v].x) < std::tie(pts_[first].y, pts_[first].x)) first = v;
        }
        std::vector<ImagePoint> out;
        out.reserve(ring_.size());
        for (std::size_t v = first, n = 0; n < ring_.size(); ++n, v = ring_.next(v)) out.push_back(pts_[v]);
        return out;
    }

private:
    /// Inserts, in order, every non-vertex point lying on the open edge a -> b.
    void absorb_collinear(std::size_t a, std::size_t b) {
        std::vector<std::pair<double, std::size_t>> on_edge;
        for (std::size_t q = 0; q < pts_.size(); ++q) {
            if (ring_.contains(q) || !on_closed_segment(pts_[a], pts_[b], pts_[q])) continue;
            on_edge.emplace_back(dist2(pts_[a], pts_[q]), q);
        }
        std::sort(on_edge.begin(), on_edge.end());
        std::size_t at = a;
        for (const auto& [d, q] : on_edge) {
            ring_.insert_after(at, q);
            at = q;
        }
    }

    /// Deepest admissible notch under edge a -> b: a chain of new vertices,
    /// monotone along the edge, that leaves no point in the cut-off region
    /// and keeps every touched angle within the bound. Returns the chain
    /// (without a and b); empty when there is none.
    std::vector<std::size_t> find_chain(std::size_t a, std::size_t b) const {
        const ImagePoint pa = pts_[a], pb = pts_[b];
        const double len2 = dist2(pa, pb);
        if (len2 <= 0.0) return {};
        const double len = std::sqrt(len2);

        struct Node {
            double t, h;
            std::size_t idx;
            bool on_ring;
        };
        std::vector<Node> nodes{{0.0, 0.0, a, true}};
        for (std::size_t q = 0; q < pts_.size(); ++q) {
            if (q == a || q == b) continue;
            const ImagePoint pq = pts_[q];
            const double t = ((pq.x - pa.x) * (pb.x - pa.x) + (pq.y - pa.y) * (pb.y - pa.y)) / len2;
            if (t < 0.0 || t > 1.0 || orient(pa, pb, pq) <= 0) continue;
            nodes.push_back({t, cross(pa, pb, pq) / len, q, ring_.contains(q)});
        }
        if (nodes.size() == 1) return {};
        nodes.push_back({1.0, 0.0, b, true});
        std::sort(nodes.begin() + 1, nodes.end() - 1,
                  [](const Node& l, const Node& r) { return std::tie(l.t, l.h) < std::tie(r.t, r.h); });
        const std::size_t n = nodes.size(), last = n - 1;
        auto usable = [&](std::size_t i) { return i == 0 || i == last || (!nodes[i].on_ring && nodes[i].t > 0.0 && nodes[i].t < 1.0); };
        auto P = [&](std::size_t i) { return pts_[nodes[i].idx]; };

        // Edges u -> v whose strip between the chain and a -> b holds no point.
        std::vector<std::vector<std::size_t>> out(n);
        for (std::size_t u = 0; u < last; ++u) {
            if (!usable(u)) continue;
            std::size_t g = u;  // first node of u's equal-t group
            while (g > 0 && nodes[g - 1].t == nodes[u].t) --g;
            std::size_t j = u + 1;
            while (j < n && nodes[j].t == nodes[u].t) ++j;
            bool blocked = false;
            for (std::size_t k = g; k < u; ++k) blocked = blocked || nodes[k].h < nodes[u].h;  // right below u
            if (blocked && u != 0) continue;

            std::size_t free_cw = Ring::kNone, ring_cw = Ring::kNone;
            auto more_cw = [&](std::size_t cur, std::size_t w) { return cur == Ring::kNone || cross(P(u), P(cur), P(w)) < 0.0; };
            while (j < n) {
                std::size_t end = j;
                while (end < n && nodes[end].t == nodes[j].t) ++end;
                for (std::size_t v = j; v < end; ++v) {
                    if (!usable(v) || (v == last && u == 0)) continue;
                    bool ok = (free_cw == Ring::kNone || orient(P(u), P(v), P(free_cw)) >= 0) &&
                              (ring_cw == Ring::kNone || orient(P(u), P(v), P(ring_cw)) > 0);
                    for (std::size_t k = j; k < v && ok; ++k) ok = nodes[k].h >= nodes[v].h;
                    if (ok) out[u].push_back(v);
                }
                for (std::size_t w = j; w < end; ++w) {
                    auto& cw = nodes[w].on_ring ? ring_cw : free_cw;
                    if (more_cw(cw, w)) cw = w;
                }
                j = end;
            }
        }

        // Longest path by removed area over (previous, current) vertex pairs.
        const double none = -1.0;
        std::vector<std::vector<double>> best(n);
        std::vector<std::vector<std::size_t>> from(n);
        for (std::size_t u = 0; u < n; ++u) {
            best[u].assign(out[u].size(), none);
            from[u].assign(out[u].size(), Ring::kNone);
        }
        const ImagePoint before_a = pts_[ring_.prev(a)], after_b = pts_[ring_.next(b)];
        for (std::size_t e = 0; e < out[0].size(); ++e) {
            if (interior_angle(before_a, pa, P(out[0][e])) <= max_angle_) best[0][e] = 0.0;
        }
        double best_total = 0.0;
        std::size_t best_u = Ring::kNone, best_e = 0;
        for (std::size_t u = 0; u < last; ++u) {
            for (std::size_t e = 0; e < out[u].size(); ++e) {
                if (best[u][e] < 0.0) continue;
                const std::size_t v = out[u][e];
                const double here = best[u][e] + cross(pa, P(v), P(u)) / 2.0;
                if (v == last) {
                    if (u != 0 && here > best_total && interior_angle(P(u), pb, after_b) <= max_angle_) {
                        best_total = here;
                        best_u = u;
                        best_e = e;
                    }
                    continue;
                }
                for (std::size_t f = 0; f < out[v].size(); ++f) {
                    if (here > best[v][f] && interior_angle(P(u), P(v), P(out[v][f])) <= max_angle_) {
                        best[v][f] = here;
                        from[v][f] = u;
                    }
                }
            }
        }
        if (best_u == Ring::kNone) return {};

        std::vector<std::size_t> chain;
        for (std::size_t u = best_u, e = best_e; u != 0;) {
            chain.push_back(nodes[u].idx);
            const std::size_t prev = from[u][e];
            const auto it = std::find(out[prev].begin(), out[prev].end(), u);
            e = static_cast<std::size_t>(it - out[prev].begin());
            u = prev;
        }
        std::reverse(chain.begin(), chain.end());

        // New edges must not cross the rest of the polygon.
        std::vector<std::size_t> path{a};
        path.insert(path.end(), chain.begin(), chain.end());
        path.push_back(b);
        for (std::size_t v = ring_.head(), k = 0; k < ring_.size(); ++k, v = ring_.next(v)) {
            const std::size_t nv = ring_.next(v);
            if (v == a) continue;
            for (std::size_t i = 0; i + 1 < path.size(); ++i) {
                const std::size_t s = path[i], t = path[i + 1];
                if (v == s || v == t || nv == s || nv == t) continue;
                if (segments_intersect(pts_[s], pts_[t], pts_[v], pts_[nv])) return {};
            }
        }
        return chain;
    }

    std::vector<std::size_t> find_split(std::size_t a, std::size_t b) const {
        auto chain = find_chain(a, b);
        if (chain.empty()) {
            const std::size_t p = find_single_split(a, b);
            if (p != Ring::kNone) chain.push_back(p);
        }
        return chain;
    }

    std::size_t find_single_split(std::size_t a, std::size_t b) const {
        const ImagePoint pa = pts_[a], pb = pts_[b];
        const double len2 = dist2(pa, pb);
        if (len2 <= 0.0) return Ring::kNone;
        // Any admissible vertex sits inside the lens where angle(a, p, b) >= pi - alpha.
        const double max_height = lens_ * std::sqrt(len2) + 1e-12;

        std::vector<std::pair<double, std::size_t>> candidates;
        for (std::size_t q = 0; q < pts_.size(); ++q) {
            if (ring_.contains(q)) continue;
            const ImagePoint pq = pts_[q];
            const double t = ((pq.x - pa.x) * (pb.x - pa.x) + (pq.y - pa.y) * (pb.y - pa.y)) / len2;
            if (t <= 0.0 || t >= 1.0) continue;
            if (orient(pa, pb, pq) <= 0) continue;
            const double height = cross(pa, pb, pq) / std::sqrt(len2);
            if (height > max_height) continue;
            candidates.emplace_back(height, q);
        }
        std::sort(candidates.begin(), candidates.end());
        for (const auto& [height, p] : candidates) {
            if (legal_split(a, p, b)) return p;
        }
        return Ring::kNone;
    }

    bool legal_split(std::size_t a, std::size_t p, std::size_t b) const {
        const ImagePoint pa = pts_[a], pp = pts_[p], pb = pts_[b];
        const std::size_t u = ring_.prev(a), w = ring_.next(b);

        // Interior angles at the three touched vertices.
        if (interior_angle(pts_[u], pa, pp) > max_angle_) return false;
        if (interior_angle(pa, pp, pb) > max_angle_) return false;
        if (interior_angle(pp, pb, pts_[w]) > max_angle_) return false;

        // The cut-off triangle must not hold any point, or it would end up outside.
        const double lo_x = std::min({pa.x, pp.x, pb.x}), hi_x = std::max({pa.x, pp.x, pb.x});
        const double lo_y = std::min({pa.y, pp.y, pb.y}), hi_y = std::max({pa.y, pp.y, pb.y});
        for (std::size_t q = 0; q < pts_.size(); ++q) {
            if (q == a || q == b || q == p) continue;
            const ImagePoint pq = pts_[q];
            if (pq.x < lo_x || pq.x > hi_x || pq.y < lo_y || pq.y > hi_y) continue;
            const int s1 = orient(pa, pb, pq), s2 = orient(pb, pp, pq), s3 = orient(pp, pa, pq);
            if (s1 >= 0 && s2 >= 0 && s3 >= 0) {
                // On a new edge it stays on the boundary; anywhere else it would be cut off.
                const bool on_new_edge = (s2 == 0 && on_closed_segment(pb, pp, pq)) ||
                                         (s3 == 0 && on_closed_segment(pp, pa, pq));
                if (!on_new_edge || ring_.contains(q)) return false;
            }
        }

        // New edges must not cross the rest of the polygon.
        for (std::size_t v = ring_.head(), n = 0; n < ring_.size(); ++n, v = ring_.next(v)) {
            const std::size_t nv = ring_.next(v);
            if (v == a) continue;  // the edge being replaced
            const ImagePoint e1 = pts_[v], e2 = pts_[nv];
            if (v != a && nv != a && segments_intersect(pa, pp, e1, e2)) return false;
            if (v != b && nv != b && segments_intersect(pp, pb, e1, e2)) return false;
        }
        return true;
    }

    std::vector<ImagePoint> pts_;
    double max_angle_;
    double lens_;
    Ring ring_;
};

}  // namespace

double interior_angle(ImagePoint prev, ImagePoint v, ImagePoint next) {
    const double ax = next.x - v.x, ay = next.y - v.y;
    const double bx = prev.x - v.x, by = prev.y - v.y;
    double theta = std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    if (theta < 0.0) theta += 2.0 * std::numbers::pi;
    return theta;
}

std::vector<ImagePoint> alpha_concave_hull(std::span<const ImagePoint> points, double alpha) {
    if (!(alpha >= 0.0 && alpha < std::numbers::pi)) throw InvalidInput("alpha must lie in [0, pi)");
    std::vector<ImagePoint> pts;
    pts.reserve(points.size());
    for (const auto& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw InvalidInput("hull input has a non-finite point");
        pts.push_back(p);
    }
    std::sort(pts.begin(), pts.end(), [](ImagePoint a, ImagePoint b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) throw DegenerateInput("hull needs at least three distinct points");

    bool collinear = true;
    for (std::size_t i = 2; i < pts.size() && collinear; ++i) collinear = orient(pts[0], pts[1], pts[i]) == 0;
    if (collinear) throw DegenerateInput("all hull input points are collinear");

    return HullRefiner(std::move(pts), alpha).run();
}

}  // namespace phough
