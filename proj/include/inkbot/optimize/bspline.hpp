#pragma once

#include "inkbot/types.hpp"

#include <array>
#include <vector>

namespace inkbot {

/// Clamped uniform cubic B-spline over the parameter interval [0, length].
class BSplineCurve {
public:
    BSplineCurve() = default;
    BSplineCurve(std::vector<Vec2> control_points, double length);

    static constexpr int degree = 3;

    const std::vector<Vec2>& control_points() const { return ctrl_; }
    std::vector<Vec2>& control_points() { return ctrl_; }
    int size() const { return static_cast<int>(ctrl_.size()); }
    double length() const { return length_; }
    std::vector<double> knots() const;

    /// Basis values and derivatives (up to order 2) of the four functions
    /// that are non-zero at t; returns the index of the first one.
    int basis(double t, std::array<std::array<double, 4>, 3>& ders) const;

    Vec2 eval(double t, int derivative = 0) const;
    /// Signed curvature at t.
    double curvature(double t) const;

    bool operator==(const BSplineCurve&) const = default;

private:
    std::vector<Vec2> ctrl_;
    double length_ = 1.0;
};

/// Gram matrices of the first and second derivatives of the basis,
/// K1_ij = integral N_i' N_j', K2_ij = integral N_i'' N_j''.
void smoothness_matrices(const BSplineCurve& curve, Eigen::MatrixXd& k1, Eigen::MatrixXd& k2);

}  // namespace inkbot
