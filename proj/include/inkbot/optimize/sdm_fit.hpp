#pragma once

#include "inkbot/optimize/bspline.hpp"

#include <vector>

namespace inkbot {

struct FitConfig {
    double alpha = 1e-4;
    double beta = 1e-4;
    int iterations = 15;
    /// 0 picks max(4, ceil(points / 6)).
    int control_points = 0;

    void validate() const;
    bool operator==(const FitConfig&) const = default;
};

int default_control_points(size_t point_count);

/// Curve through the data at uniform chord-length fractions, parameterized
/// over the data's chord length. This is the starting point of the fit.
BSplineCurve initial_curve(const std::vector<Vec2>& points, int control_points);

/// Closest-point parameters of each data point (coarse scan + Newton).
std::vector<double> foot_points(const BSplineCurve& curve, const std::vector<Vec2>& points);

double max_point_distance(const BSplineCurve& curve, const std::vector<Vec2>& points);

/// f = 1/2 sum |C(t_k) - X_k|^2 + alpha int |C'|^2 + beta int |C''|^2 with
/// t_k the foot points of the current curve.
double sdm_objective(const BSplineCurve& curve, const std::vector<Vec2>& points, double alpha, double beta);

/// Gradient of sdm_objective with respect to the control points, ordered
/// (x_0..x_{m-1}, y_0..y_{m-1}).
Eigen::VectorXd sdm_gradient(const BSplineCurve& curve, const std::vector<Vec2>& points, double alpha, double beta);

struct FitResult {
    BSplineCurve curve;
    BSplineCurve initial;
    /// Objective and max point distance before the first and after each
    /// accepted iteration.
    std::vector<double> objective;
    std::vector<double> max_error;
};

/// Squared-distance-minimization fit. Each iteration recomputes foot points,
/// solves the curvature-aware quadratic model and backtracks until the true
/// objective does not increase. Throws InvalidInput when fewer than 4
/// distinct points are given.
FitResult fit_sdm(const std::vector<Vec2>& points, const FitConfig& cfg = {});

}  // namespace inkbot
