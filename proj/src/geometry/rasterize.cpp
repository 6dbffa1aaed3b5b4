#include "inkbot/geometry/contours.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

namespace inkbot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double edge_fn(const Vec2& a, const Vec2& b, const Vec2& p) {
    return (b.x() - a.x()) * (p.y() - a.y()) - (b.y() - a.y()) * (p.x() - a.x());
}

// Liang-Barsky clip of the 2D segment a->b to a rectangle; returns the
// parameter interval kept, or false.
bool clip_segment(const Vec2& a, const Vec2& b, double xmin, double ymin, double xmax, double ymax,
                  double& s0, double& s1) {
    s0 = 0.0;
    s1 = 1.0;
    const double dx = b.x() - a.x(), dy = b.y() - a.y();
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {a.x() - xmin, xmax - a.x(), a.y() - ymin, ymax - a.y()};
    for (int i = 0; i < 4; ++i) {
        if (p[i] == 0.0) {
            if (q[i] < 0.0) return false;
            continue;
        }
        const double r = q[i] / p[i];
        if (p[i] < 0.0)
            s0 = std::max(s0, r);
        else
            s1 = std::min(s1, r);
        if (s0 > s1) return false;
    }
    return true;
}

}  // namespace

DepthBuffer::DepthBuffer(const TriangleMesh& mesh, const Camera& cam)
    : width_(cam.width()), height_(cam.height()), depth_(static_cast<size_t>(cam.width()) * cam.height(), kInf) {
    for (const Face& f : mesh.faces) {
        Vec3 p[3];
        bool behind = false;
        for (int c = 0; c < 3; ++c) {
            p[c] = cam.project(mesh.vertices[f[c]]);
            behind |= p[c].z() < cam.near_plane();
        }
        if (behind) continue;
        const Vec2 a = p[0].head<2>(), b = p[1].head<2>(), c = p[2].head<2>();
        const double area = edge_fn(a, b, c);
        if (area == 0.0) continue;
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x(), b.x(), c.x()}) - 0.5)));
        const int x1 = std::min(width_ - 1, static_cast<int>(std::ceil(std::max({a.x(), b.x(), c.x()}) - 0.5)));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y(), b.y(), c.y()}) - 0.5)));
        const int y1 = std::min(height_ - 1, static_cast<int>(std::ceil(std::max({a.y(), b.y(), c.y()}) - 0.5)));
        for (int y = y0; y <= y1; ++y)
            for (int x = x0; x <= x1; ++x) {
                const Vec2 q(x + 0.5, y + 0.5);
                const double w0 = edge_fn(b, c, q) / area;
                const double w1 = edge_fn(c, a, q) / area;
                const double w2 = edge_fn(a, b, q) / area;
                if (w0 < -1e-9 || w1 < -1e-9 || w2 < -1e-9) continue;
                const double inv = w0 / p[0].z() + w1 / p[1].z() + w2 / p[2].z();
                double& d = depth_[static_cast<size_t>(y) * width_ + x];
                d = std::min(d, 1.0 / inv);
            }
    }
}

bool DepthBuffer::visible(int x, int y, double depth, double eps) const {
    double far = -kInf;
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
            const int nx = x + dx, ny = y + dy;
            if (nx < 0 || ny < 0 || nx >= width_ || ny >= height_) continue;
            far = std::max(far, at(nx, ny));
        }
    return depth <= far + eps;
}

ContourImage rasterize_contours(const std::vector<TaggedChains>& chains, const Viewpoint& view,
                                const TriangleMesh* occluder) {
    const Camera cam(view);
    ContourImage img(cam.width(), cam.height());
    std::unique_ptr<DepthBuffer> zbuf;
    double eps = 0.0;
    if (occluder && !occluder->empty()) {
        zbuf = std::make_unique<DepthBuffer>(*occluder, cam);
        eps = 1e-4 * diameter(*occluder);
    }

    for (const auto& tagged : chains) {
        const auto bit = static_cast<std::uint8_t>(tagged.family);

        // pixel coordinates here are shifted so pixel centres are integers
        auto plot = [&](int x, int y, double cover, const Vec2& a, const Vec2& b, double inv_a, double inv_b) {
            if (cover <= 0.0 || !img.inside(x, y)) return;
            if (zbuf) {
                const Vec2 d = b - a;
                const double len2 = d.squaredNorm();
                const double s = len2 > 0 ? std::clamp((Vec2(x, y) - a).dot(d) / len2, 0.0, 1.0) : 0.0;
                const double depth = 1.0 / ((1 - s) * inv_a + s * inv_b);
                if (!zbuf->visible(x, y, depth, eps)) return;
            }
            float& v = img.at(x, y);
            v = std::max(v, static_cast<float>(cover));
            img.tag(x, y) |= bit;
        };

        auto draw = [&](Vec3 A, Vec3 B) {
            double da = cam.depth(A), db = cam.depth(B);
            const double near = cam.near_plane();
            if (da < near && db < near) return;
            if (da < near) {
                A = A + (near - da) / (db - da) * (B - A);
                da = near;
            } else if (db < near) {
                B = B + (near - db) / (da - db) * (A - B);
                db = near;
            }
            const Vec3 pa = cam.project(A), pb = cam.project(B);
            Vec2 a(pa.x() - 0.5, pa.y() - 0.5), b(pb.x() - 0.5, pb.y() - 0.5);
            double ia = 1.0 / pa.z(), ib = 1.0 / pb.z();
            double s0, s1;
            if (!clip_segment(a, b, -2.0, -2.0, img.width + 1.0, img.height + 1.0, s0, s1)) return;
            const Vec2 ca = a + s0 * (b - a), cb = a + s1 * (b - a);
            const double cia = ia + s0 * (ib - ia), cib = ia + s1 * (ib - ia);
            a = ca;
            b = cb;
            ia = cia;
            ib = cib;

            const bool steep = std::abs(b.y() - a.y()) > std::abs(b.x() - a.x());
            Vec2 u = a, w = b;
            if (steep) {
                std::swap(u.x(), u.y());
                std::swap(w.x(), w.y());
            }
            if (u.x() > w.x()) std::swap(u, w);
            const double dx = w.x() - u.x();
            const double grad = dx == 0.0 ? 0.0 : (w.y() - u.y()) / dx;
            const int x0 = static_cast<int>(std::lround(u.x())), x1 = static_cast<int>(std::lround(w.x()));
            for (int x = x0; x <= x1; ++x) {
                const double yf = u.y() + grad * (x - u.x());
                const int yi = static_cast<int>(std::floor(yf));
                const double fr = yf - yi;
                if (steep) {
                    plot(yi, x, 1.0 - fr, a, b, ia, ib);
                    plot(yi + 1, x, fr, a, b, ia, ib);
                } else {
                    plot(x, yi, 1.0 - fr, a, b, ia, ib);
                    plot(x, yi + 1, fr, a, b, ia, ib);
                }
            }
        };

        for (const auto& chain : tagged.chains) {
            const auto& pts = chain.points;
            for (size_t i = 0; i + 1 < pts.size(); ++i) draw(pts[i], pts[i + 1]);
            if (chain.closed && pts.size() > 2) draw(pts.back(), pts.front());
        }
    }
    return img;
}

}  // namespace inkbot
