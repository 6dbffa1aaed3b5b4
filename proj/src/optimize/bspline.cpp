#include "inkbot/optimize/bspline.hpp"

#include <algorithm>
#include <cmath>

namespace inkbot {

BSplineCurve::BSplineCurve(std::vector<Vec2> control_points, double length)
    : ctrl_(std::move(control_points)), length_(length) {
    if (ctrl_.size() < 4) throw InvalidInput("B-spline needs at least 4 control points");
    if (!(length_ > 0)) throw InvalidInput("B-spline parameter length must be positive");
}

std::vector<double> BSplineCurve::knots() const {
    const int m = size();
    const int spans = m - degree;
    std::vector<double> k;
    for (int i = 0; i < degree; ++i) k.push_back(0.0);
    for (int i = 0; i <= spans; ++i) k.push_back(length_ * i / spans);
    for (int i = 0; i < degree; ++i) k.push_back(length_);
    return k;
}

int BSplineCurve::basis(double t, std::array<std::array<double, 4>, 3>& ders) const {
    // NURBS-book style derivative basis evaluation on the clamped uniform
    // knot vector.
    const int m = size();
    const int spans = m - degree;
    const double h = length_ / spans;
    t = std::clamp(t, 0.0, length_);
    int span = std::min(static_cast<int>(t / h), spans - 1);
    const int s = span + degree;  // index into knot vector
    auto knot = [&](int i) {
        const int j = i - degree;
        if (j <= 0) return 0.0;
        if (j >= spans) return length_;
        return length_ * j / spans;
    };

    double ndu[4][4];
    double left[4], right[4];
    ndu[0][0] = 1.0;
    for (int j = 1; j <= degree; ++j) {
        left[j] = t - knot(s + 1 - j);
        right[j] = knot(s + j) - t;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu[j][r] = right[r + 1] + left[j - r];
            const double tmp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * tmp;
            saved = left[j - r] * tmp;
        }
        ndu[j][j] = saved;
    }
    for (int j = 0; j <= degree; ++j) ders[0][j] = ndu[j][degree];

    double a[2][4];
    for (int r = 0; r <= degree; ++r) {
        int s1 = 0, s2 = 1;
        a[0][0] = 1.0;
        for (int k = 1; k <= 2; ++k) {
            double d = 0.0;
            const int rk = r - k, pk = degree - k;
            if (r >= k) {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk];
                d = a[s2][0] * ndu[rk][pk];
            }
            const int j1 = rk >= -1 ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : degree - r;
            for (int j = j1; j <= j2; ++j) {
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][rk + j];
                d += a[s2][j] * ndu[rk + j][pk];
            }
            if (r <= pk) {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::swap(s1, s2);
        }
    }
    for (int r = 0; r <= degree; ++r) {
        ders[1][r] *= degree;
        ders[2][r] *= degree * (degree - 1);
    }
    return span;
}

Vec2 BSplineCurve::eval(double t, int derivative) const {
    std::array<std::array<double, 4>, 3> d;
    const int first = basis(t, d);
    Vec2 c = Vec2::Zero();
    for (int j = 0; j < 4; ++j) c += d[derivative][j] * ctrl_[first + j];
    return c;
}

double BSplineCurve::curvature(double t) const {
    const Vec2 d1 = eval(t, 1), d2 = eval(t, 2);
    const double sp = d1.norm();
    if (sp <= 0) return 0.0;
    return (d1.x() * d2.y() - d1.y() * d2.x()) / (sp * sp * sp);
}

void smoothness_matrices(const BSplineCurve& curve, Eigen::MatrixXd& k1, Eigen::MatrixXd& k2) {
    const int m = curve.size();
    const int spans = m - BSplineCurve::degree;
    k1 = Eigen::MatrixXd::Zero(m, m);
    k2 = Eigen::MatrixXd::Zero(m, m);
    // 3-point Gauss-Legendre is exact for the degree-4 products
    const double gx[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    const double h = curve.length() / spans;
    std::array<std::array<double, 4>, 3> d;
    for (int s = 0; s < spans; ++s) {
        const double mid = (s + 0.5) * h;
        for (int q = 0; q < 3; ++q) {
            const double t = mid + 0.5 * h * gx[q];
            const double w = 0.5 * h * gw[q];
            const int first = curve.basis(t, d);
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    k1(first + i, first + j) += w * d[1][i] * d[1][j];
                    k2(first + i, first + j) += w * d[2][i] * d[2][j];
                }
        }
    }
}

}  // namespace inkbot
