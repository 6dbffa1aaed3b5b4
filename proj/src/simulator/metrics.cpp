#include "inkbot/simulator/metrics.hpp"

#include "inkbot/image/image.hpp"
#include "inkbot/simplify/simplify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace inkbot {

namespace {

constexpr double kDeg = 180.0 / std::numbers::pi;

}  // namespace

TurningPointMetric angle_of_contingence(const std::vector<Vec2>& samples, const std::vector<int>& turning_points,
                                        const std::vector<double>& reference, int window) {
    if (window < 1) throw InvalidInput("angle window must be >= 1");
    if (!reference.empty() && reference.size() != turning_points.size())
        throw InvalidInput("reference angle count differs from turning point count");
    const int n = static_cast<int>(samples.size());
    TurningPointMetric m;
    double err = 0;
    for (size_t i = 0; i < turning_points.size(); ++i) {
        const int k = turning_points[i];
        if (k <= 0 || k >= n - 1) throw InvalidInput("turning point " + std::to_string(k) + " is not interior");
        const Vec2 v1 = samples[std::max(0, k - window)] - samples[k];
        const Vec2 v2 = samples[std::min(n - 1, k + window)] - samples[k];
        const double l = v1.norm() * v2.norm();
        double theta = 180.0;
        bool flat = true;
        if (l > 0) {
            const double cross = v1.x() * v2.y() - v1.y() * v2.x();
            const double dot = v1.dot(v2);
            flat = std::abs(cross) <= 1e-12 * l && dot < 0;
            if (!flat) theta = std::atan2(std::abs(cross), dot) * kDeg;
        }
        m.indices.push_back(k);
        m.theta.push_back(theta);
        m.degenerate.push_back(flat ? 1 : 0);
        if (!reference.empty()) err += std::abs(theta - reference[i]);
    }
    if (!reference.empty() && !turning_points.empty()) m.mean_abs_error = err / turning_points.size();
    return m;
}

std::vector<Vec2> extract_drawn_centerline(const CanvasRaster& canvas, std::optional<Vec2> start_px, float threshold) {
    BinaryImage mask(canvas.width, canvas.height);
    for (size_t i = 0; i < canvas.density.size(); ++i) mask.px[i] = canvas.density[i] > threshold;
    int count = 0;
    const std::vector<int> labels = label_components(mask, count);
    std::vector<int> area(count + 1, 0);
    for (int l : labels) ++area[l];
    int keep = 0, strokes = 0;
    for (int l = 1; l <= count; ++l)
        if (area[l] >= 4) {
            ++strokes;
            keep = l;
        }
    if (strokes == 0) throw InvalidInput("centerline: canvas is empty");
    if (strokes > 1) throw InvalidInput("centerline: canvas holds " + std::to_string(strokes) + " separate strokes");

    int x0 = canvas.width, y0 = canvas.height, x1 = -1, y1 = -1;
    for (int y = 0; y < canvas.height; ++y)
        for (int x = 0; x < canvas.width; ++x)
            if (labels[static_cast<size_t>(y) * canvas.width + x] == keep) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
    const int ox = x0 - 1, oy = y0 - 1;
    BinaryImage crop(x1 - x0 + 3, y1 - y0 + 3);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x)
            if (labels[static_cast<size_t>(y) * canvas.width + x] == keep) crop.set(x - ox, y - oy, 1);
    const BinaryImage skel = raster::thin(crop);

    std::vector<int> nodes;
    for (int i = 0; i < static_cast<int>(skel.px.size()); ++i)
        if (skel.px[i]) nodes.push_back(i);
    if (nodes.empty()) throw InvalidInput("centerline: skeleton is empty");

    const int w = skel.width;
    auto dijkstra = [&](int src, std::vector<int>& prev) {
        std::vector<double> dist(skel.px.size(), std::numeric_limits<double>::infinity());
        prev.assign(skel.px.size(), -1);
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[src] = 0;
        pq.push({0, src});
        while (!pq.empty()) {
            auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            const int ux = u % w, uy = u / w;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (!dx && !dy) continue;
                    if (!skel.get(ux + dx, uy + dy)) continue;
                    const int v = (uy + dy) * w + ux + dx;
                    const double nd = d + ((dx && dy) ? std::numbers::sqrt2 : 1.0);
                    if (nd < dist[v]) {
                        dist[v] = nd;
                        prev[v] = u;
                        pq.push({nd, v});
                    }
                }
        }
        int far = src;
        for (int v : nodes)
            if (std::isfinite(dist[v]) && dist[v] > dist[far]) far = v;
        return far;
    };
    std::vector<int> prev;
    const int a = dijkstra(nodes.front(), prev);
    const int b = dijkstra(a, prev);
    std::vector<Vec2> path;
    for (int v = b; v != -1; v = prev[v]) path.emplace_back(v % w + ox + 0.5, v / w + oy + 0.5);
    if (start_px && (path.back() - *start_px).norm() < (path.front() - *start_px).norm())
        std::reverse(path.begin(), path.end());
    return path;
}

std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, double spacing) {
    if (!(spacing > 0)) throw InvalidInput("resample: spacing must be positive");
    if (pts.empty()) return {};
    std::vector<Vec2> out{pts.front()};
    double carry = 0;  // arc length since the last emitted point
    for (size_t i = 1; i < pts.size(); ++i) {
        const Vec2 a = pts[i - 1], b = pts[i];
        const double len = (b - a).norm();
        double pos = spacing - carry;
        while (pos <= len) {
            out.push_back(a + (b - a) * (pos / len));
            pos += spacing;
        }
        carry = len - (pos - spacing);
    }
    return out;
}

namespace {

float sample(const CanvasRaster& canvas, const Vec2& mm) {
    // bilinear between pixel centres
    const Vec2 p = canvas.to_px(mm) - Vec2(0.5, 0.5);
    const int x = static_cast<int>(std::floor(p.x())), y = static_cast<int>(std::floor(p.y()));
    const double fx = p.x() - x, fy = p.y() - y;
    auto at = [&](int i, int j) { return canvas.inside(i, j) ? static_cast<double>(canvas.at(i, j)) : 0.0; };
    return static_cast<float>((1 - fy) * ((1 - fx) * at(x, y) + fx * at(x + 1, y)) +
                              fy * ((1 - fx) * at(x, y + 1) + fx * at(x + 1, y + 1)));
}

}  // namespace

double deposited_width(const CanvasRaster& canvas, const Vec2& at_mm, const Vec2& dir) {
    const Vec2 n = Vec2(-dir.y(), dir.x()).normalized();
    const double step = 0.05 / canvas.px_per_mm;
    const double reach = std::max(canvas.width, canvas.height) / canvas.px_per_mm;
    double area = 0, peak = 0;
    for (int side : {-1, 1}) {
        // trapezoid rule out to the first blank sample
        double prev = sample(canvas, at_mm);
        for (double s = step; s < reach; s += step) {
            const double v = sample(canvas, at_mm + side * s * n);
            area += 0.5 * (prev + v) * step;
            peak = std::max({peak, prev, v});
            prev = v;
            if (v <= 0) break;
        }
    }
    return peak > 0 ? area / peak : 0.0;
}

std::vector<double> density_profile(const CanvasRaster& canvas, const std::vector<Vec2>& path_mm, double half_width_mm) {
    std::vector<double> out;
    const double step = 1.0 / canvas.px_per_mm;
    const std::vector<Vec2> along = resample_polyline(path_mm, step);
    for (size_t i = 0; i < along.size(); ++i) {
        const Vec2 t = (along[std::min(i + 1, along.size() - 1)] - along[i > 0 ? i - 1 : 0]);
        const Vec2 n = t.norm() > 0 ? Vec2(-t.y(), t.x()).normalized() : Vec2(0, 1);
        double best = 0;
        for (double s = -half_width_mm; s <= half_width_mm; s += 0.5 * step)
            best = std::max(best, static_cast<double>(sample(canvas, along[i] + s * n)));
        out.push_back(best);
    }
    return out;
}

SCurveFixture s_curve_fixture() {
    SCurveFixture f;
    f.angles = {135, 93, 130, 81, 148, 150};
    const int signs[6] = {1, 1, -1, -1, 1, 1};
    const int run = 20;
    const double step = 2.0;
    double heading = 0;
    Vec2 p(0, 0);
    f.points.push_back(p);
    for (int seg = 0; seg < 7; ++seg) {
        if (seg > 0) {
            f.corners.push_back(seg * run);
            heading += signs[seg - 1] * (180.0 - f.angles[seg - 1]) / kDeg;
        }
        for (int i = 0; i < run; ++i) {
            p += step * Vec2(std::cos(heading), std::sin(heading));
            f.points.push_back(p);
        }
    }
    Vec2 lo = f.points.front();
    for (const Vec2& q : f.points) lo = lo.cwiseMin(q);
    for (Vec2& q : f.points) q += Vec2(20, 20) - lo;
    return f;
}

}  // namespace inkbot
