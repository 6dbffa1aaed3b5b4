#include "inkbot/geometry/curvature.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <set>

namespace inkbot {

namespace {

void tangent_frame(const Vec3& n, Vec3& e1, Vec3& e2) {
    const Vec3 seed = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    e1 = (seed - seed.dot(n) * n).normalized();
    e2 = n.cross(e1);
}

std::vector<int> fitting_neighbourhood(const MeshTopology& topo, int v) {
    const auto& ring1 = topo.vertex_neighbors[v];
    if (ring1.size() >= 6) return ring1;
    std::set<int> ring2(ring1.begin(), ring1.end());
    for (int w : ring1)
        for (int x : topo.vertex_neighbors[w])
            if (x != v) ring2.insert(x);
    return {ring2.begin(), ring2.end()};
}

}  // namespace

CurvatureField compute_curvature(const TriangleMesh& mesh) {
    validate(mesh);
    const MeshTopology topo(mesh);
    const size_t nv = mesh.vertices.size();

    CurvatureField field;
    field.k1.resize(nv);
    field.k2.resize(nv);
    field.dir1.resize(nv);
    field.dir2.resize(nv);

    for (size_t v = 0; v < nv; ++v) {
        if (topo.vertex_faces[v].empty())
            throw MeshError("vertex " + std::to_string(v) + " is isolated (belongs to no face)");

        const Vec3& n = mesh.normals[v];
        Vec3 e1, e2;
        tangent_frame(n, e1, e2);

        const std::vector<int> nbrs = fitting_neighbourhood(topo, static_cast<int>(v));
        const bool with_slope = nbrs.size() >= 5;
        const int cols = with_slope ? 5 : 3;
        Eigen::MatrixXd A(nbrs.size(), cols);
        Eigen::VectorXd h(nbrs.size());
        for (size_t r = 0; r < nbrs.size(); ++r) {
            const Vec3 d = mesh.vertices[nbrs[r]] - mesh.vertices[v];
            const double x = d.dot(e1), y = d.dot(e2);
            A(r, 0) = x * x;
            A(r, 1) = x * y;
            A(r, 2) = y * y;
            if (with_slope) {
                A(r, 3) = x;
                A(r, 4) = y;
            }
            h(r) = d.dot(n);
        }
        Eigen::VectorXd c = Eigen::VectorXd::Zero(cols);
        if (nbrs.size() >= 3) c = A.colPivHouseholderQr().solve(h);

        const double fx = with_slope ? c(3) : 0.0, fy = with_slope ? c(4) : 0.0;
        Eigen::Matrix2d first, second;
        first << 1 + fx * fx, fx * fy, fx * fy, 1 + fy * fy;
        const double scale = 1.0 / std::sqrt(1 + fx * fx + fy * fy);
        second << 2 * c(0), c(1), c(1), 2 * c(2);
        second *= scale;

        // Principal curvatures are -eig(I^-1 II): positive on convex surfaces
        // where the neighbourhood falls away from the outward normal.
        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix2d> es(-second, first);
        const Eigen::Vector2d lam = es.eigenvalues();  // ascending
        const Eigen::Matrix2d vec = es.eigenvectors();
        field.k1[v] = lam(1);
        field.k2[v] = lam(0);
        Vec3 d1 = vec(0, 1) * e1 + vec(1, 1) * e2;
        if (d1.norm() < 1e-12) d1 = e1;
        field.dir1[v] = d1.normalized();
        field.dir2[v] = n.cross(field.dir1[v]);
    }
    return field;
}

ViewCurvature compute_view_curvature(const TriangleMesh& mesh, const MeshTopology& topo,
                                     const CurvatureField& field, const Viewpoint& view) {
    const Camera cam(view);
    const size_t nv = mesh.vertices.size();
    ViewCurvature out;
    out.ndotv.resize(nv);
    out.kr.resize(nv);
    out.dwkr.assign(nv, 0.0);
    out.q1.resize(nv);
    out.t1.resize(nv);
    out.dt1q1.assign(nv, 0.0);

    std::vector<Vec3> wdir(nv, Vec3::Zero());
    for (size_t v = 0; v < nv; ++v) {
        const Vec3& n = mesh.normals[v];
        const Vec3 to_eye = cam.to_eye(mesh.vertices[v]);
        const double ndotv = n.dot(to_eye);
        out.ndotv[v] = ndotv;
        const double u = to_eye.dot(field.dir1[v]);
        const double w = to_eye.dot(field.dir2[v]);
        out.kr[v] = field.k1[v] * u * u + field.k2[v] * w * w;
        const Vec3 proj = to_eye - ndotv * n;
        if (proj.norm() > 1e-9) wdir[v] = proj.normalized();

        // View-dependent curvature: Q = S (I + (sec - 1) w w^T) in the
        // principal frame, q1 its largest singular value.
        const double sin2 = u * u + w * w;
        double uu = 0, uw = 0, ww = 0;
        if (sin2 > 1e-12) {
            uu = u * u / sin2;
            uw = u * w / sin2;
            ww = w * w / sin2;
        }
        // Past the silhouette keep the clamped maximum foreshortening so q1
        // does not fall off again and fake a ridge there.
        const double sec_m1 = 1.0 / std::max(ndotv, 1e-3) - 1.0;
        Eigen::Matrix2d Q;
        Q << field.k1[v] * (1 + sec_m1 * uu), field.k1[v] * sec_m1 * uw,
             field.k2[v] * sec_m1 * uw, field.k2[v] * (1 + sec_m1 * ww);
        Eigen::JacobiSVD<Eigen::Matrix2d> svd(Q, Eigen::ComputeFullV);
        out.q1[v] = svd.singularValues()(0);
        const Eigen::Vector2d t = svd.matrixV().col(0);
        out.t1[v] = (t(0) * field.dir1[v] + t(1) * field.dir2[v]).normalized();
    }

    // Per-vertex gradient of kr from area-weighted face gradients.
    std::vector<Vec3> grad(nv, Vec3::Zero());
    std::vector<double> area(nv, 0.0);
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        const Face& tri = mesh.faces[f];
        const Vec3& p0 = mesh.vertices[tri[0]];
        const Vec3& p1 = mesh.vertices[tri[1]];
        const Vec3& p2 = mesh.vertices[tri[2]];
        const Vec3 cr = (p1 - p0).cross(p2 - p0);
        const double a2 = cr.norm();
        if (a2 <= 0) continue;
        const Vec3 nf = cr / a2;
        const Vec3 g = (out.kr[tri[0]] * nf.cross(p2 - p1) + out.kr[tri[1]] * nf.cross(p0 - p2) +
                        out.kr[tri[2]] * nf.cross(p1 - p0)) / a2;
        for (int c : tri) {
            grad[c] += 0.5 * a2 * g;
            area[c] += 0.5 * a2;
        }
    }
    for (size_t v = 0; v < nv; ++v) {
        if (area[v] <= 0) continue;
        const Vec3& n = mesh.normals[v];
        Vec3 g = grad[v] / area[v];
        g -= g.dot(n) * n;
        out.dwkr[v] = g.dot(wdir[v]);
    }

    // Derivative of q1 along t1 by finite differences into the face the
    // direction points into.
    for (size_t v = 0; v < nv; ++v) {
        const Vec3& n = mesh.normals[v];
        const Vec3& t = out.t1[v];
        const Vec3 s = n.cross(t);
        const Vec3& p = mesh.vertices[v];
        for (int f : topo.vertex_faces[v]) {
            const Face& tri = mesh.faces[f];
            int j = -1, k = -1;
            for (int c = 0; c < 3; ++c)
                if (tri[c] == static_cast<int>(v)) {
                    j = tri[(c + 1) % 3];
                    k = tri[(c + 2) % 3];
                }
            const Vec3 a = mesh.vertices[j] - p, b = mesh.vertices[k] - p;
            // solve t = alpha a + beta b in the tangent plane
            const double a_t = a.dot(t), a_s = a.dot(s), b_t = b.dot(t), b_s = b.dot(s);
            const double det = a_t * b_s - a_s * b_t;
            if (std::abs(det) < 1e-18) continue;
            const double alpha = b_s / det;
            const double beta = -a_s / det;
            if (alpha < 0 || beta < 0 || alpha + beta <= 0) continue;
            const double dist = 1.0 / (alpha + beta);
            const double q_hit = (alpha * out.q1[j] + beta * out.q1[k]) / (alpha + beta);
            out.dt1q1[v] = (q_hit - out.q1[v]) / dist;
            break;
        }
    }
    return out;
}

}  // namespace inkbot
