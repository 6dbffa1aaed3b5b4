#pragma once

#include "inkbot/geometry/camera.hpp"
#include "inkbot/geometry/curvature.hpp"
#include "inkbot/geometry/mesh.hpp"
#include "inkbot/image/image.hpp"

#include <vector>

namespace inkbot {

/// A polyline in model space. Closed chains do not repeat the first point.
struct Chain3 {
    Polyline3 points;
    bool closed = false;
};
using ChainSet = std::vector<Chain3>;

struct TaggedChains {
    ContourFamily family;
    ChainSet chains;
};

struct ContourParams {
    /// Suggestive contours need dwkr above this (1/model-unit).
    double sc_derivative_threshold = 0.01;
    /// Apparent ridges need q1 above this multiple of 1/diameter.
    double ar_threshold_scale = 8.0;
};

/// Mesh edges shared by a front- and a back-facing face, plus all boundary
/// edges, linked into maximal chains.
ChainSet extract_occluding_contours(const TriangleMesh& mesh, const Viewpoint& view);

ChainSet extract_suggestive_contours(const TriangleMesh& mesh, const Viewpoint& view,
                                     const CurvatureField& field, const ContourParams& params = {});

ChainSet extract_apparent_ridges(const TriangleMesh& mesh, const Viewpoint& view,
                                 const CurvatureField& field, const ContourParams& params = {});

/// Same as above with precomputed view quantities.
ChainSet extract_suggestive_contours(const TriangleMesh& mesh, const ViewCurvature& vc,
                                     const ContourParams& params);
ChainSet extract_apparent_ridges(const TriangleMesh& mesh, const MeshTopology& topo, const ViewCurvature& vc,
                                 const ContourParams& params);

/// Depth of the nearest surface per pixel (view-axis distance, +inf where
/// empty), sampled at pixel centres.
class DepthBuffer {
public:
    DepthBuffer(const TriangleMesh& mesh, const Camera& cam);
    int width() const { return width_; }
    int height() const { return height_; }
    double at(int x, int y) const { return depth_[static_cast<size_t>(y) * width_ + x]; }

    /// True when a point at `depth` projecting to pixel (x, y) is not behind
    /// the surface: compared with the farthest depth in the 3x3 neighbourhood
    /// so lines lying on silhouettes survive.
    bool visible(int x, int y, double depth, double eps) const;

private:
    int width_, height_;
    std::vector<double> depth_;
};

/// Draws chains with 1-px anti-aliased lines. When `occluder` is non-null,
/// pixels hidden behind it are dropped (epsilon 1e-4 x its diameter).
ContourImage rasterize_contours(const std::vector<TaggedChains>& chains, const Viewpoint& view,
                                const TriangleMesh* occluder);

/// All three families, hidden lines removed against the mesh itself.
struct ContourResult {
    std::vector<TaggedChains> chains;
    ContourImage image;
};
ContourResult render_contours(const TriangleMesh& mesh, const Viewpoint& view,
                              unsigned family_mask = 7, const ContourParams& params = {});

}  // namespace inkbot
