#pragma once

#include "inkbot/geometry/camera.hpp"
#include "inkbot/geometry/mesh.hpp"

#include <vector>

namespace inkbot {

/// Per-vertex principal curvatures (k1 >= k2, positive on convex surfaces with
/// outward normals) and orthonormal principal directions in the tangent plane.
struct CurvatureField {
    std::vector<double> k1, k2;
    std::vector<Vec3> dir1, dir2;

    size_t size() const { return k1.size(); }
};

/// Fits a quadric height field over each vertex's 1-ring (grown to the 2-ring
/// when the 1-ring is too small to constrain five coefficients).
/// Throws MeshError on isolated vertices.
CurvatureField compute_curvature(const TriangleMesh& mesh);

/// View-dependent per-vertex quantities for one viewpoint.
struct ViewCurvature {
    std::vector<double> ndotv;
    /// Radial curvature scaled by sin^2(theta): k1 u^2 + k2 v^2 where (u, v)
    /// are the view vector's tangent components. Same zero set as the radial
    /// curvature, but finite where the view is along the normal.
    std::vector<double> kr;
    /// Directional derivative of kr along the unit projected view direction.
    std::vector<double> dwkr;
    /// Maximum view-dependent curvature and its direction (world space).
    std::vector<double> q1;
    std::vector<Vec3> t1;
    /// Derivative of q1 along t1.
    std::vector<double> dt1q1;
};

ViewCurvature compute_view_curvature(const TriangleMesh& mesh, const MeshTopology& topo,
                                     const CurvatureField& field, const Viewpoint& view);

}  // namespace inkbot
