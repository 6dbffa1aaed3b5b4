#pragma once

#include "inkbot/image/image.hpp"

#include <vector>

namespace inkbot {

/// Ordered pixel coordinates (x right, y down, integer values at pixel
/// indices; sub-pixel values allowed).
struct RasterPolyline {
    std::vector<Vec2> points;
    bool closed = false;

    bool operator==(const RasterPolyline&) const = default;
};

struct CornerParams {
    /// Round-corner threshold ratio, in percent of the mean |curvature| over
    /// the region of support.
    double split_ratio = 160.0;
    double smoothing_sigma = 3.0;
    /// Candidates whose angle between the arms of the smoothed curve (at
    /// least 2 sigma long) exceeds this are dropped as noise.
    double max_corner_angle_deg = 160.0;

    void validate() const;
};

/// Traces a binary 1-px skeleton (intensity >= 0.5) into polylines. Junction
/// pixels (three or more foreground neighbours) end traces; each is claimed by the
/// first trace that reaches it, so every foreground pixel lands in exactly
/// one polyline.
std::vector<RasterPolyline> trace_contours(const ContourImage& img);

/// Signed curvature (1/px) of the Gaussian-smoothed point sequence. Fewer
/// than 5 points gives all zeros.
std::vector<double> local_curvature(const RasterPolyline& poly, const CornerParams& params);

/// Local maxima of |curvature| that exceed split_ratio/100 times the mean
/// |curvature| over their region of support and form a sharp enough angle.
/// Sorted indices.
std::vector<int> detect_corners(const RasterPolyline& poly, const CornerParams& params);

/// Cuts at the given indices; the corner point ends one piece and starts
/// the next. A closed polyline with k >= 1 corners yields k open pieces.
std::vector<RasterPolyline> split_at_corners(const RasterPolyline& poly, const std::vector<int>& corners);

/// trace + detect + split.
std::vector<RasterPolyline> vectorize(const ContourImage& img, const CornerParams& params);

double polyline_length(const std::vector<Vec2>& pts, bool closed = false);

}  // namespace inkbot
