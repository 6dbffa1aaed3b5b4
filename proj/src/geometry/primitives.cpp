#include "inkbot/geometry/primitives.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <tuple>

namespace inkbot::primitives {

namespace {

constexpr double kPi = std::numbers::pi;

// Merges vertices that coincide after quantisation.
TriangleMesh weld(const std::vector<Vec3>& soup, const std::vector<Face>& faces, double quantum) {
    TriangleMesh mesh;
    std::map<std::tuple<long long, long long, long long>, int> index;
    std::vector<int> remap(soup.size());
    for (size_t i = 0; i < soup.size(); ++i) {
        const auto key = std::make_tuple(std::llround(soup[i].x() / quantum),
                                         std::llround(soup[i].y() / quantum),
                                         std::llround(soup[i].z() / quantum));
        auto [it, inserted] = index.emplace(key, static_cast<int>(mesh.vertices.size()));
        if (inserted) mesh.vertices.push_back(soup[i]);
        remap[i] = it->second;
    }
    for (const Face& f : faces) {
        Face g{remap[f[0]], remap[f[1]], remap[f[2]]};
        if (g[0] != g[1] && g[1] != g[2] && g[0] != g[2]) mesh.faces.push_back(g);
    }
    return mesh;
}

}  // namespace

TriangleMesh icosphere(int subdiv, double radius) {
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0},  {-1, -t, 0}, {1, -t, 0}, {0, -1, t},  {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1},  {t, 0, 1},  {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& p : v) p.normalize();
    std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                           {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                           {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                           {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7}, {9, 8, 1}};
    for (int s = 0; s < subdiv; ++s) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int id = static_cast<int>(v.size()) - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<Face> next;
        next.reserve(f.size() * 4);
        for (const Face& tri : f) {
            const int a = midpoint(tri[0], tri[1]);
            const int b = midpoint(tri[1], tri[2]);
            const int c = midpoint(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    TriangleMesh mesh;
    mesh.normals = v;
    for (Vec3& p : v) p *= radius;
    mesh.vertices = std::move(v);
    mesh.faces = std::move(f);
    return mesh;
}

TriangleMesh plane_grid(int n, double size) {
    TriangleMesh mesh;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            mesh.vertices.emplace_back(size * (double(i) / (n - 1) - 0.5), size * (double(j) / (n - 1) - 0.5), 0.0);
    for (int j = 0; j + 1 < n; ++j)
        for (int i = 0; i + 1 < n; ++i) {
            const int a = j * n + i, b = a + 1, c = a + n, d = c + 1;
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    mesh.normals.assign(mesh.vertices.size(), Vec3::UnitZ());
    return mesh;
}

TriangleMesh cylinder(double radius, double height, int segments, int rings, bool capped) {
    TriangleMesh mesh;
    for (int r = 0; r <= rings; ++r)
        for (int s = 0; s < segments; ++s) {
            const double a = 2 * kPi * s / segments;
            mesh.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), height * r / rings);
        }
    for (int r = 0; r < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            const int a = r * segments + s, b = r * segments + (s + 1) % segments;
            const int c = a + segments, d = b + segments;
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    if (capped) {
        const int bottom = static_cast<int>(mesh.vertices.size());
        mesh.vertices.emplace_back(0, 0, 0);
        const int top = bottom + 1;
        mesh.vertices.emplace_back(0, 0, height);
        const int last = rings * segments;
        for (int s = 0; s < segments; ++s) {
            mesh.faces.push_back({bottom, (s + 1) % segments, s});
            mesh.faces.push_back({top, last + s, last + (s + 1) % segments});
        }
        compute_vertex_normals(mesh);
    } else {
        for (const Vec3& p : mesh.vertices) mesh.normals.push_back(Vec3(p.x(), p.y(), 0).normalized());
    }
    return mesh;
}

TriangleMesh torus(double major_radius, double minor_radius, int major_segments, int minor_segments) {
    TriangleMesh mesh;
    for (int i = 0; i < major_segments; ++i) {
        const double u = 2 * kPi * i / major_segments;
        const Vec3 dir(std::cos(u), std::sin(u), 0);
        for (int j = 0; j < minor_segments; ++j) {
            const double w = 2 * kPi * j / minor_segments;
            const Vec3 n = std::cos(w) * dir + std::sin(w) * Vec3::UnitZ();
            mesh.vertices.push_back(major_radius * dir + minor_radius * n);
            mesh.normals.push_back(n);
        }
    }
    for (int i = 0; i < major_segments; ++i)
        for (int j = 0; j < minor_segments; ++j) {
            const int i1 = (i + 1) % major_segments, j1 = (j + 1) % minor_segments;
            const int a = i * minor_segments + j, b = i1 * minor_segments + j;
            const int c = i1 * minor_segments + j1, d = i * minor_segments + j1;
            mesh.faces.push_back({a, b, c});
            mesh.faces.push_back({a, c, d});
        }
    return mesh;
}

TriangleMesh saddle(int n, double extent) {
    TriangleMesh mesh = plane_grid(n, 2 * extent);
    for (size_t i = 0; i < mesh.vertices.size(); ++i) {
        Vec3& p = mesh.vertices[i];
        p.z() = p.x() * p.x() - p.y() * p.y();
        mesh.normals[i] = Vec3(-2 * p.x(), 2 * p.y(), 1).normalized();
    }
    return mesh;
}

TriangleMesh rounded_box(double half, double bevel, int face_steps, int bevel_steps) {
    // Grid coordinates along one axis, dense inside the bevel bands.
    std::vector<double> coords;
    const double inner = half - bevel;
    for (int k = 0; k < bevel_steps; ++k) coords.push_back(-half + bevel * k / bevel_steps);
    for (int k = 0; k < face_steps; ++k) coords.push_back(-inner + 2 * inner * k / face_steps);
    for (int k = 0; k <= bevel_steps; ++k) coords.push_back(inner + bevel * k / bevel_steps);
    const int n = static_cast<int>(coords.size());

    std::vector<Vec3> soup;
    std::vector<Face> faces;
    for (int axis = 0; axis < 3; ++axis)
        for (int sign = -1; sign <= 1; sign += 2) {
            const int u_axis = (axis + 1) % 3, v_axis = (axis + 2) % 3;
            const int base = static_cast<int>(soup.size());
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    Vec3 p;
                    p[axis] = sign * half;
                    p[u_axis] = coords[i];
                    p[v_axis] = coords[j];
                    const Vec3 core = p.cwiseMax(Vec3::Constant(-inner)).cwiseMin(Vec3::Constant(inner));
                    const Vec3 d = p - core;
                    soup.push_back(core + bevel * d.normalized());
                }
            for (int j = 0; j + 1 < n; ++j)
                for (int i = 0; i + 1 < n; ++i) {
                    const int a = base + j * n + i, b = a + 1, c = a + n, d = c + 1;
                    if (sign > 0) {
                        faces.push_back({a, b, d});
                        faces.push_back({a, d, c});
                    } else {
                        faces.push_back({a, d, b});
                        faces.push_back({a, c, d});
                    }
                }
        }
    TriangleMesh mesh = weld(soup, faces, half * 1e-7);
    for (const Vec3& p : mesh.vertices) {
        const Vec3 core = p.cwiseMax(Vec3::Constant(-inner)).cwiseMin(Vec3::Constant(inner));
        mesh.normals.push_back((p - core).normalized());
    }
    return mesh;
}

TriangleMesh revolve(const std::vector<Eigen::Vector2d>& profile, int segments) {
    if (profile.size() < 3 || profile.front().x() != 0.0 || profile.back().x() != 0.0)
        throw InvalidInput("revolve: profile must start and end on the axis");
    TriangleMesh mesh;
    const int rings = static_cast<int>(profile.size()) - 2;
    mesh.vertices.emplace_back(0, 0, profile.front().y());
    for (int r = 1; r <= rings; ++r)
        for (int s = 0; s < segments; ++s) {
            const double a = 2 * kPi * s / segments;
            mesh.vertices.emplace_back(profile[r].x() * std::cos(a), profile[r].x() * std::sin(a), profile[r].y());
        }
    const int top = static_cast<int>(mesh.vertices.size());
    mesh.vertices.emplace_back(0, 0, profile.back().y());
    auto ring = [&](int r, int s) { return 1 + (r - 1) * segments + (s % segments); };
    for (int s = 0; s < segments; ++s) mesh.faces.push_back({0, ring(1, s + 1), ring(1, s)});
    for (int r = 1; r < rings; ++r)
        for (int s = 0; s < segments; ++s) {
            mesh.faces.push_back({ring(r, s), ring(r, s + 1), ring(r + 1, s + 1)});
            mesh.faces.push_back({ring(r, s), ring(r + 1, s + 1), ring(r + 1, s)});
        }
    for (int s = 0; s < segments; ++s) mesh.faces.push_back({top, ring(rings, s), ring(rings, s + 1)});
    compute_vertex_normals(mesh);
    return mesh;
}

TriangleMesh merge(const std::vector<TriangleMesh>& parts) {
    TriangleMesh out;
    for (const TriangleMesh& m : parts) {
        const int base = static_cast<int>(out.vertices.size());
        out.vertices.insert(out.vertices.end(), m.vertices.begin(), m.vertices.end());
        out.normals.insert(out.normals.end(), m.normals.begin(), m.normals.end());
        for (const Face& f : m.faces) out.faces.push_back({f[0] + base, f[1] + base, f[2] + base});
    }
    return out;
}

namespace {

// Closed tube along a quadratic Bezier with linearly tapered radius.
TriangleMesh spout_tube(const Vec3& p0, const Vec3& p1, const Vec3& p2, double r0, double r1, int along,
                        int around) {
    TriangleMesh mesh;
    auto point = [&](double t) { return (1 - t) * (1 - t) * p0 + 2 * (1 - t) * t * p1 + t * t * p2; };
    auto tangent = [&](double t) { return Vec3(2 * (1 - t) * (p1 - p0) + 2 * t * (p2 - p1)).normalized(); };
    for (int i = 0; i <= along; ++i) {
        const double t = double(i) / along;
        const Vec3 c = point(t), tan = tangent(t);
        const Vec3 side = tan.cross(Vec3::UnitY()).normalized();
        const Vec3 up = side.cross(tan).normalized();
        const double r = r0 + (r1 - r0) * t;
        for (int j = 0; j < around; ++j) {
            const double a = 2 * kPi * j / around;
            mesh.vertices.push_back(c + r * (std::cos(a) * side + std::sin(a) * up));
        }
    }
    for (int i = 0; i < along; ++i)
        for (int j = 0; j < around; ++j) {
            const int a = i * around + j, b = i * around + (j + 1) % around;
            mesh.faces.push_back({a, a + around, b + around});
            mesh.faces.push_back({a, b + around, b});
        }
    const int c0 = static_cast<int>(mesh.vertices.size());
    mesh.vertices.push_back(point(0));
    const int c1 = c0 + 1;
    mesh.vertices.push_back(point(1));
    const int last = along * around;
    for (int j = 0; j < around; ++j) {
        mesh.faces.push_back({c0, (j + 1) % around, j});
        mesh.faces.push_back({c1, last + j, last + (j + 1) % around});
    }
    // orient outward: the side frame above is right-handed about the tangent
    const Vec3 n0 = face_normal(mesh, 0);
    const Vec3 centroid = point(0.0);
    if (n0.dot(mesh.vertices[mesh.faces[0][0]] - centroid) < 0)
        for (Face& f : mesh.faces) std::swap(f[1], f[2]);
    compute_vertex_normals(mesh);
    return mesh;
}

}  // namespace

TriangleMesh teapot() {
    const std::vector<Eigen::Vector2d> body_profile = {
        {0.0, 0.0},   {0.75, 0.0},  {0.95, 0.08}, {1.15, 0.3},  {1.3, 0.6},  {1.35, 0.9},
        {1.3, 1.2},   {1.15, 1.45}, {0.95, 1.62}, {0.85, 1.66}, {0.8, 1.72}, {0.6, 1.82},
        {0.3, 1.88},  {0.12, 1.9},  {0.14, 1.98}, {0.2, 2.06},  {0.14, 2.14}, {0.0, 2.16}};
    // Catmull-Rom densified profile so the silhouette is not faceted
    std::vector<Eigen::Vector2d> dense;
    const size_t np = body_profile.size();
    for (size_t i = 0; i + 1 < np; ++i) {
        const Eigen::Vector2d& p0 = body_profile[i == 0 ? 0 : i - 1];
        const Eigen::Vector2d& p1 = body_profile[i];
        const Eigen::Vector2d& p2 = body_profile[i + 1];
        const Eigen::Vector2d& p3 = body_profile[std::min(i + 2, np - 1)];
        for (int k = 0; k < 4; ++k) {
            const double t = k / 4.0, t2 = t * t, t3 = t2 * t;
            Eigen::Vector2d q = 0.5 * (2 * p1 + (p2 - p0) * t + (2 * p0 - 5 * p1 + 4 * p2 - p3) * t2 +
                                       (3 * p1 - p0 - 3 * p2 + p3) * t3);
            if (i > 0 || k > 0) q.x() = std::max(q.x(), 1e-3);
            dense.push_back(q);
        }
    }
    dense.push_back(body_profile.back());
    TriangleMesh body = revolve(dense, 64);

    TriangleMesh handle = torus(0.5, 0.09, 48, 12);
    const Eigen::Matrix3d to_xz = Eigen::AngleAxisd(kPi / 2, Vec3::UnitX()).toRotationMatrix();
    for (size_t i = 0; i < handle.vertices.size(); ++i) {
        handle.vertices[i] = to_xz * handle.vertices[i] + Vec3(-1.32, 0, 0.95);
        handle.normals[i] = to_xz * handle.normals[i];
    }

    TriangleMesh spout = spout_tube({0.9, 0, 0.55}, {1.75, 0, 0.6}, {2.05, 0, 1.45}, 0.26, 0.1, 24, 20);
    return merge({body, handle, spout});
}

}  // namespace inkbot::primitives
