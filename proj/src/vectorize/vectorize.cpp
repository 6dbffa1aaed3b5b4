#include "inkbot/vectorize/vectorize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace inkbot {

void CornerParams::validate() const {
    if (!(split_ratio > 0)) throw InvalidInput("corner params: split ratio must be > 0");
    if (smoothing_sigma < 0) throw InvalidInput("corner params: smoothing sigma must be >= 0");
    if (!(max_corner_angle_deg > 0 && max_corner_angle_deg <= 180))
        throw InvalidInput("corner params: max corner angle must be in (0, 180]");
}

double polyline_length(const std::vector<Vec2>& pts, bool closed) {
    double len = 0;
    for (size_t i = 0; i + 1 < pts.size(); ++i) len += (pts[i + 1] - pts[i]).norm();
    if (closed && pts.size() > 2) len += (pts.front() - pts.back()).norm();
    return len;
}

namespace {

// 4-neighbours first so tracing does not skip pixels on staircases
constexpr int kDx[8] = {1, 0, -1, 0, 1, -1, -1, 1};
constexpr int kDy[8] = {0, 1, 0, -1, 1, 1, -1, -1};

bool adjacent(const Vec2& a, const Vec2& b) {
    return std::abs(a.x() - b.x()) <= 1 && std::abs(a.y() - b.y()) <= 1 && a != b;
}

}  // namespace

std::vector<RasterPolyline> trace_contours(const ContourImage& img) {
    const BinaryImage fg = threshold(img, 0.5f);
    const int w = fg.width, h = fg.height;
    auto idx = [w](int x, int y) { return static_cast<size_t>(y) * w + x; };

    std::vector<char> junction(fg.px.size(), 0);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!fg.get(x, y)) continue;
            int count = 0;
            for (int k = 0; k < 8; ++k) count += fg.get(x + kDx[k], y + kDy[k]);
            junction[idx(x, y)] = count >= 3;
        }

    std::vector<char> used(fg.px.size(), 0);
    auto plain_neighbours = [&](int x, int y) {
        int n = 0;
        for (int k = 0; k < 8; ++k) {
            const int nx = x + kDx[k], ny = y + kDy[k];
            n += fg.get(nx, ny) && !junction[idx(nx, ny)];
        }
        return n;
    };
    auto walk = [&](int sx, int sy, std::vector<Vec2>& pts) {
        int x = sx, y = sy;
        used[idx(x, y)] = 1;
        pts.push_back(Vec2(x, y));
        while (true) {
            int next = -1;
            for (int k = 0; k < 8 && next < 0; ++k) {
                const int nx = x + kDx[k], ny = y + kDy[k];
                if (fg.get(nx, ny) && !junction[idx(nx, ny)] && !used[idx(nx, ny)]) next = k;
            }
            if (next < 0) break;
            x += kDx[next];
            y += kDy[next];
            used[idx(x, y)] = 1;
            pts.push_back(Vec2(x, y));
        }
    };
    auto claim_adjacent_junction = [&](const Vec2& p) -> std::optional<Vec2> {
        const int x = static_cast<int>(p.x()), y = static_cast<int>(p.y());
        for (int k = 0; k < 8; ++k) {
            const int nx = x + kDx[k], ny = y + kDy[k];
            if (fg.get(nx, ny) && junction[idx(nx, ny)] && !used[idx(nx, ny)]) {
                used[idx(nx, ny)] = 1;
                return Vec2(nx, ny);
            }
        }
        return std::nullopt;
    };

    std::vector<RasterPolyline> out;
    auto finish_open = [&](std::vector<Vec2> pts) {
        if (auto j = claim_adjacent_junction(pts.back())) pts.push_back(*j);
        if (auto j = claim_adjacent_junction(pts.front())) pts.insert(pts.begin(), *j);
        if (pts.size() >= 2) out.push_back({std::move(pts), false});
    };

    // open runs start where a plain pixel has at most one plain neighbour
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!fg.get(x, y) || junction[idx(x, y)] || used[idx(x, y)]) continue;
            if (plain_neighbours(x, y) > 1) continue;
            std::vector<Vec2> pts;
            walk(x, y, pts);
            finish_open(std::move(pts));
        }
    // what is left of the plain pixels forms loops
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!fg.get(x, y) || junction[idx(x, y)] || used[idx(x, y)]) continue;
            std::vector<Vec2> pts;
            walk(x, y, pts);
            if (pts.size() >= 4 && adjacent(pts.front(), pts.back())) {
                out.push_back({std::move(pts), true});
            } else {
                finish_open(std::move(pts));
            }
        }
    // unclaimed junction clusters
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!fg.get(x, y) || !junction[idx(x, y)] || used[idx(x, y)]) continue;
            std::vector<Vec2> pts{Vec2(x, y)};
            used[idx(x, y)] = 1;
            for (bool grew = true; grew;) {
                grew = false;
                const int cx = static_cast<int>(pts.back().x()), cy = static_cast<int>(pts.back().y());
                for (int k = 0; k < 8 && !grew; ++k) {
                    const int nx = cx + kDx[k], ny = cy + kDy[k];
                    if (fg.get(nx, ny) && junction[idx(nx, ny)] && !used[idx(nx, ny)]) {
                        used[idx(nx, ny)] = 1;
                        pts.push_back(Vec2(nx, ny));
                        grew = true;
                    }
                }
            }
            if (pts.size() >= 2) {
                out.push_back({std::move(pts), false});
                continue;
            }
            // lone junction pixel: hang it on an adjacent polyline end
            for (auto& poly : out) {
                if (poly.closed) continue;
                if (adjacent(poly.points.back(), pts[0])) {
                    poly.points.push_back(pts[0]);
                    break;
                }
                if (adjacent(poly.points.front(), pts[0])) {
                    poly.points.insert(poly.points.begin(), pts[0]);
                    break;
                }
            }
        }
    return out;
}

namespace {

std::vector<Vec2> smooth(const RasterPolyline& poly, double sigma) {
    const auto& p = poly.points;
    const int n = static_cast<int>(p.size());
    if (sigma <= 0 || n < 3) return p;
    const int r = static_cast<int>(std::ceil(3 * sigma));
    std::vector<double> k(2 * r + 1);
    double sum = 0;
    for (int i = -r; i <= r; ++i) sum += k[i + r] = std::exp(-0.5 * i * i / (sigma * sigma));
    auto sample = [&](int i) -> Vec2 {
        if (poly.closed) return p[((i % n) + n) % n];
        // odd reflection keeps ends in place and lines straight
        if (i < 0) return 2 * p[0] - p[std::min(-i, n - 1)];
        if (i >= n) return 2 * p[n - 1] - p[std::max(2 * (n - 1) - i, 0)];
        return p[i];
    };
    std::vector<Vec2> out(n);
    for (int i = 0; i < n; ++i) {
        Vec2 acc = Vec2::Zero();
        for (int j = -r; j <= r; ++j) acc += k[j + r] * sample(i + j);
        out[i] = acc / sum;
    }
    return out;
}

double wrap_angle(double a) {
    while (a > std::numbers::pi) a -= 2 * std::numbers::pi;
    while (a < -std::numbers::pi) a += 2 * std::numbers::pi;
    return a;
}

}  // namespace

std::vector<double> local_curvature(const RasterPolyline& poly, const CornerParams& params) {
    params.validate();
    const int n = static_cast<int>(poly.points.size());
    std::vector<double> k(n, 0.0);
    if (n < 5) return k;
    const auto s = smooth(poly, params.smoothing_sigma);
    auto at = [&](int i) -> const Vec2& { return s[((i % n) + n) % n]; };
    // Turning between chords spanning about one smoothing width keeps pixel
    // quantization from dominating on gently curved lines.
    const int span = std::max(1, static_cast<int>(std::lround(params.smoothing_sigma)));
    const int lo = poly.closed ? 0 : 1, hi = poly.closed ? n : n - 1;
    for (int i = lo; i < hi; ++i) {
        const int kk = poly.closed ? std::min(span, (n - 1) / 2) : std::min({span, i, n - 1 - i});
        const Vec2 a = at(i) - at(i - kk), b = at(i + kk) - at(i);
        const double ds = 0.5 * (a.norm() + b.norm());
        if (ds <= 0) continue;
        k[i] = wrap_angle(std::atan2(b.y(), b.x()) - std::atan2(a.y(), a.x())) / ds;
    }
    if (!poly.closed) {
        k[0] = k[1];
        k[n - 1] = k[n - 2];
    }
    return k;
}

std::vector<int> detect_corners(const RasterPolyline& poly, const CornerParams& params) {
    const auto kappa = local_curvature(poly, params);
    const int n = static_cast<int>(kappa.size());
    std::vector<int> corners;
    if (n < 5) return corners;
    std::vector<double> a(n);
    for (int i = 0; i < n; ++i) a[i] = std::abs(kappa[i]);
    const bool closed = poly.closed;
    auto valid = [&](int i) { return closed || (i >= 0 && i < n); };
    auto A = [&](int i) { return a[((i % n) + n) % n]; };

    std::vector<char> is_candidate(n, 0);
    for (int s = 0; s < n;) {
        int e = s;
        while (e + 1 < n && a[e + 1] == a[s]) ++e;
        // plateau [s, e]; for closed curves a plateau may wrap, which only
        // matters for perfectly constant curvature and is ignored
        const bool left_ok = valid(s - 1) && A(s - 1) < a[s];
        const bool right_ok = valid(e + 1) && A(e + 1) < a[s];
        if (left_ok && right_ok && a[s] >= 1e-3) is_candidate[(s + e) / 2] = 1;
        s = e + 1;
    }

    const double ratio = params.split_ratio / 100.0;
    const auto sm = smooth(poly, params.smoothing_sigma);
    const int arm_min = std::max(2, static_cast<int>(std::lround(2 * params.smoothing_sigma)));
    const double cos_max = std::cos(params.max_corner_angle_deg * std::numbers::pi / 180.0);
    auto sharp = [&](int i, int left, int right) {
        int l = std::max(left, arm_min), r = std::max(right, arm_min);
        if (closed) {
            l = std::min(l, (n - 1) / 2);
            r = std::min(r, (n - 1) / 2);
        } else {
            l = std::min(l, i);
            r = std::min(r, n - 1 - i);
        }
        if (l == 0 || r == 0) return false;
        const Vec2 u = sm[((i - l) % n + n) % n] - sm[i], v = sm[(i + r) % n] - sm[i];
        const double nu = u.norm(), nv = v.norm();
        if (nu == 0 || nv == 0) return false;
        return u.dot(v) / (nu * nv) >= cos_max;
    };
    for (int i = 0; i < n; ++i) {
        if (!is_candidate[i]) continue;
        int left = 0, right = 0;
        while (left < n / 2 && valid(i - left - 1) && A(i - left - 1) < A(i - left)) ++left;
        while (right < n / 2 && valid(i + right + 1) && A(i + right + 1) < A(i + right)) ++right;
        double sum = 0;
        for (int j = i - left; j <= i + right; ++j) sum += A(j);
        const double thresh = ratio / (left + right + 1) * sum;
        if (a[i] >= thresh && sharp(i, left, right)) corners.push_back(i);
    }
    return corners;
}

std::vector<RasterPolyline> split_at_corners(const RasterPolyline& poly, const std::vector<int>& corners) {
    const int n = static_cast<int>(poly.points.size());
    for (size_t i = 0; i < corners.size(); ++i) {
        if (corners[i] < 0 || corners[i] >= n) throw InvalidInput("split: corner index out of range");
        if (i && corners[i] <= corners[i - 1]) throw InvalidInput("split: corner indices must increase");
    }
    if (corners.empty()) return {poly};
    std::vector<RasterPolyline> out;
    auto piece = [&](int from, int to) {  // inclusive, may wrap for closed
        RasterPolyline p;
        for (int i = from;; i = (i + 1) % n) {
            p.points.push_back(poly.points[i]);
            if (i == to) break;
        }
        if (p.points.size() >= 2) out.push_back(std::move(p));
    };
    if (poly.closed) {
        const int k = static_cast<int>(corners.size());
        for (int i = 0; i < k; ++i) {
            const int from = corners[i], to = corners[(i + 1) % k];
            if (k == 1) {
                RasterPolyline p;
                for (int j = 0; j <= n; ++j) p.points.push_back(poly.points[(from + j) % n]);
                out.push_back(std::move(p));
            } else {
                piece(from, to);
            }
        }
        return out;
    }
    int prev = 0;
    for (int c : corners) {
        if (c > prev) piece(prev, c);
        prev = c;
    }
    if (prev < n - 1) piece(prev, n - 1);
    return out;
}

std::vector<RasterPolyline> vectorize(const ContourImage& img, const CornerParams& params) {
    params.validate();
    std::vector<RasterPolyline> out;
    for (const auto& poly : trace_contours(img)) {
        auto pieces = split_at_corners(poly, detect_corners(poly, params));
        for (auto& p : pieces) out.push_back(std::move(p));
    }
    return out;
}

}  // namespace inkbot
