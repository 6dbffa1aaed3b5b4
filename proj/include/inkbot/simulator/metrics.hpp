#pragma once

#include "inkbot/simulator/brush.hpp"

#include <optional>
#include <vector>

namespace inkbot {

struct TurningPointMetric {
    std::vector<int> indices;
    std::vector<double> theta;     // degrees
    std::vector<char> degenerate;  // collinear window, theta = 180
    double mean_abs_error = 0;     // against the reference, when given
};

constexpr int kAngleWindow = 5;

/// Interior angle at each index between (C[k-w], C[k]) and (C[k], C[k+w]);
/// the window is shortened at the ends. Indices must be interior.
TurningPointMetric angle_of_contingence(const std::vector<Vec2>& samples, const std::vector<int>& turning_points,
                                        const std::vector<double>& reference = {}, int window = kAngleWindow);

/// Skeleton of the single inked region, ordered along its longest path and
/// starting at the end nearest `start_px` (when given). Pixel coordinates.
/// Throws InvalidInput for an empty canvas or more than one stroke.
std::vector<Vec2> extract_drawn_centerline(const CanvasRaster& canvas, std::optional<Vec2> start_px = std::nullopt,
                                           float threshold = 0.25f);

/// Points at equal arc-length spacing along a polyline.
std::vector<Vec2> resample_polyline(const std::vector<Vec2>& pts, double spacing);

/// Coverage width in mm across the line through `at_mm` perpendicular to
/// `dir`: the integral of density over the cross-section divided by its
/// peak. Unlike a 0.5 threshold on interpolated samples it does not depend
/// on where the stroke sits in the pixel grid.
double deposited_width(const CanvasRaster& canvas, const Vec2& at_mm, const Vec2& dir);

/// Max density across the stroke at 1 px steps along a robot-frame polyline.
std::vector<double> density_profile(const CanvasRaster& canvas, const std::vector<Vec2>& path_mm, double half_width_mm);

/// Reference S-curve: 141 points at 2 px steps, seven straight runs of 20
/// steps whose six corners have interior angles 135, 93, 130, 81, 148, 150.
struct SCurveFixture {
    std::vector<Vec2> points;
    std::vector<int> corners;
    std::vector<double> angles;
};
SCurveFixture s_curve_fixture();

}  // namespace inkbot
