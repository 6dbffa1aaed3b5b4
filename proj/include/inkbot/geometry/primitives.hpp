#pragma once

#include "inkbot/geometry/mesh.hpp"

namespace inkbot::primitives {

/// Subdivided icosahedron; subdiv=4 gives 2562 vertices.
TriangleMesh icosphere(int subdiv, double radius = 1.0);

/// Flat n x n vertex grid in the z=0 plane spanning [-size/2, size/2]^2.
TriangleMesh plane_grid(int n, double size);

/// Cylinder around +Z from z=0 to z=height. Caps are triangle fans.
TriangleMesh cylinder(double radius, double height, int segments, int rings, bool capped = true);

/// Torus around +Z.
TriangleMesh torus(double major_radius, double minor_radius, int major_segments, int minor_segments);

/// Height field z = x^2 - y^2 over [-extent, extent]^2.
TriangleMesh saddle(int n, double extent);

/// Axis-aligned cube [-half, half]^3 whose 12 edges are rounded with
/// cylindrical bevels of the given radius.
TriangleMesh rounded_box(double half, double bevel, int face_steps, int bevel_steps);

/// Closed surface of revolution around +Z. The profile runs from the axis at
/// the bottom to the axis at the top as (radius, z) pairs; first and last
/// radius must be zero.
TriangleMesh revolve(const std::vector<Eigen::Vector2d>& profile, int segments);

/// Low-poly procedural teapot (body of revolution, lid knob, torus handle,
/// tapered spout). Closed components, unioned by concatenation.
TriangleMesh teapot();

/// Concatenates meshes (no welding).
TriangleMesh merge(const std::vector<TriangleMesh>& parts);

}  // namespace inkbot::primitives
