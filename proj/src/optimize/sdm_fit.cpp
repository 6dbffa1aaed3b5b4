#include "inkbot/optimize/sdm_fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace inkbot {

void FitConfig::validate() const {
    if (alpha < 0 || beta < 0) throw InvalidInput("fit config: alpha and beta must be >= 0");
    if (iterations < 1) throw InvalidInput("fit config: iterations must be >= 1");
    if (control_points != 0 && control_points < 4) throw InvalidInput("fit config: need at least 4 control points");
}

int default_control_points(size_t point_count) {
    return std::max(4, static_cast<int>((point_count + 5) / 6));
}

namespace {

std::vector<double> chord_params(const std::vector<Vec2>& pts) {
    std::vector<double> s(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i) s[i] = s[i - 1] + (pts[i] - pts[i - 1]).norm();
    return s;
}

size_t distinct_count(const std::vector<Vec2>& pts) {
    std::vector<std::pair<double, double>> v;
    for (const Vec2& p : pts) v.emplace_back(p.x(), p.y());
    std::sort(v.begin(), v.end());
    return static_cast<size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

double newton_foot(const BSplineCurve& c, const Vec2& x, double t) {
    const double L = c.length();
    for (int it = 0; it < 50; ++it) {
        const Vec2 p = c.eval(t), d1 = c.eval(t, 1), d2 = c.eval(t, 2);
        const double g = (p - x).dot(d1);
        const double h = d1.squaredNorm() + (p - x).dot(d2);
        if (h <= 0) break;
        const double nt = std::clamp(t - g / h, 0.0, L);
        const double step = std::abs(nt - t);
        t = nt;
        if (step < 1e-13 * std::max(1.0, L)) break;
    }
    return t;
}

}  // namespace

BSplineCurve initial_curve(const std::vector<Vec2>& points, int m) {
    if (points.size() < 2) throw InvalidInput("fit: need at least 2 points");
    const auto s = chord_params(points);
    const double L = s.back();
    if (!(L > 0)) throw InvalidInput("fit: degenerate input (all points coincide)");
    std::vector<Vec2> ctrl(m);
    size_t k = 0;
    for (int i = 0; i < m; ++i) {
        const double target = L * i / (m - 1);
        while (k + 2 < points.size() && s[k + 1] < target) ++k;
        const double seg = s[k + 1] - s[k];
        const double u = seg > 0 ? std::clamp((target - s[k]) / seg, 0.0, 1.0) : 0.0;
        ctrl[i] = points[k] + u * (points[k + 1] - points[k]);
    }
    return BSplineCurve(std::move(ctrl), L);
}

std::vector<double> foot_points(const BSplineCurve& curve, const std::vector<Vec2>& points) {
    const int samples = 24 * (curve.size() - BSplineCurve::degree) + 1;
    std::vector<double> ts(samples);
    std::vector<Vec2> cs(samples);
    for (int i = 0; i < samples; ++i) {
        ts[i] = curve.length() * i / (samples - 1);
        cs[i] = curve.eval(ts[i]);
    }
    std::vector<double> out(points.size());
    for (size_t k = 0; k < points.size(); ++k) {
        int best = 0;
        double bd = std::numeric_limits<double>::infinity();
        for (int i = 0; i < samples; ++i) {
            const double d = (cs[i] - points[k]).squaredNorm();
            if (d < bd) {
                bd = d;
                best = i;
            }
        }
        out[k] = newton_foot(curve, points[k], ts[best]);
    }
    return out;
}

double max_point_distance(const BSplineCurve& curve, const std::vector<Vec2>& points) {
    const auto t = foot_points(curve, points);
    double m = 0;
    for (size_t k = 0; k < points.size(); ++k) m = std::max(m, (curve.eval(t[k]) - points[k]).norm());
    return m;
}

namespace {

Eigen::VectorXd flatten(const BSplineCurve& c) {
    const int m = c.size();
    Eigen::VectorXd p(2 * m);
    for (int i = 0; i < m; ++i) {
        p(i) = c.control_points()[i].x();
        p(m + i) = c.control_points()[i].y();
    }
    return p;
}

BSplineCurve unflatten(const Eigen::VectorXd& p, double length) {
    const int m = static_cast<int>(p.size() / 2);
    std::vector<Vec2> ctrl(m);
    for (int i = 0; i < m; ++i) ctrl[i] = Vec2(p(i), p(m + i));
    return BSplineCurve(std::move(ctrl), length);
}

double smooth_energy(const BSplineCurve& c, const Eigen::MatrixXd& k1, const Eigen::MatrixXd& k2, double alpha,
                     double beta) {
    const Eigen::VectorXd p = flatten(c);
    const int m = c.size();
    double e = 0;
    for (int d = 0; d < 2; ++d) {
        const Eigen::VectorXd q = p.segment(d * m, m);
        e += alpha * q.dot(k1 * q) + beta * q.dot(k2 * q);
    }
    return e;
}

double data_energy(const BSplineCurve& c, const std::vector<Vec2>& points, const std::vector<double>& t) {
    double e = 0;
    for (size_t k = 0; k < points.size(); ++k) e += 0.5 * (c.eval(t[k]) - points[k]).squaredNorm();
    return e;
}

}  // namespace

double sdm_objective(const BSplineCurve& curve, const std::vector<Vec2>& points, double alpha, double beta) {
    Eigen::MatrixXd k1, k2;
    smoothness_matrices(curve, k1, k2);
    return data_energy(curve, points, foot_points(curve, points)) + smooth_energy(curve, k1, k2, alpha, beta);
}

Eigen::VectorXd sdm_gradient(const BSplineCurve& curve, const std::vector<Vec2>& points, double alpha, double beta) {
    const int m = curve.size();
    Eigen::MatrixXd k1, k2;
    smoothness_matrices(curve, k1, k2);
    const auto t = foot_points(curve, points);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(2 * m);
    std::array<std::array<double, 4>, 3> d;
    // foot points are stationary, so only the explicit dependence remains
    for (size_t k = 0; k < points.size(); ++k) {
        const int first = curve.basis(t[k], d);
        const Vec2 r = curve.eval(t[k]) - points[k];
        for (int j = 0; j < 4; ++j) {
            g(first + j) += d[0][j] * r.x();
            g(m + first + j) += d[0][j] * r.y();
        }
    }
    const Eigen::VectorXd p = flatten(curve);
    const Eigen::MatrixXd s = 2 * alpha * k1 + 2 * beta * k2;
    g.head(m) += s * p.head(m);
    g.tail(m) += s * p.tail(m);
    return g;
}

FitResult fit_sdm(const std::vector<Vec2>& points, const FitConfig& cfg) {
    cfg.validate();
    if (distinct_count(points) < 4) throw InvalidInput("fit: degenerate input, fewer than 4 distinct points");
    const int m = cfg.control_points ? cfg.control_points : default_control_points(points.size());

    FitResult res;
    res.initial = initial_curve(points, m);
    BSplineCurve cur = res.initial;
    const double L = cur.length();
    Eigen::MatrixXd k1, k2;
    smoothness_matrices(cur, k1, k2);
    const Eigen::MatrixXd smooth = 2 * cfg.alpha * k1 + 2 * cfg.beta * k2;

    auto evaluate = [&](const BSplineCurve& c, std::vector<double>& t, double& maxerr) {
        t = foot_points(c, points);
        maxerr = 0;
        for (size_t k = 0; k < points.size(); ++k) maxerr = std::max(maxerr, (c.eval(t[k]) - points[k]).norm());
        return data_energy(c, points, t) + smooth_energy(c, k1, k2, cfg.alpha, cfg.beta);
    };

    std::vector<double> t;
    double err = 0;
    double f = evaluate(cur, t, err);
    res.objective.push_back(f);
    res.max_error.push_back(err);

    std::array<std::array<double, 4>, 3> d;
    for (int it = 0; it < cfg.iterations; ++it) {
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(2 * m, 2 * m);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(2 * m);
        auto add_term = [&](int first, const std::array<double, 4>& N, const Vec2& v, double w, const Vec2& x) {
            // w * ((C - X) . v)^2 with C = sum N_j P_j
            double row[8];
            int col[8];
            for (int j = 0; j < 4; ++j) {
                row[j] = N[j] * v.x();
                col[j] = first + j;
                row[4 + j] = N[j] * v.y();
                col[4 + j] = m + first + j;
            }
            const double target = x.dot(v);
            for (int a = 0; a < 8; ++a) {
                rhs(col[a]) += w * row[a] * target;
                for (int b = 0; b < 8; ++b) A(col[a], col[b]) += w * row[a] * row[b];
            }
        };
        for (size_t k = 0; k < points.size(); ++k) {
            const int first = cur.basis(t[k], d);
            const Vec2& x = points[k];
            const Vec2 c = cur.eval(t[k]);
            const Vec2 d1 = cur.eval(t[k], 1);
            const bool at_end = t[k] <= 1e-9 * L || t[k] >= L * (1 - 1e-9);
            const double speed = d1.norm();
            if (at_end || speed <= 0) {
                add_term(first, d[0], Vec2::UnitX(), 1.0, x);
                add_term(first, d[0], Vec2::UnitY(), 1.0, x);
                continue;
            }
            const Vec2 T = d1 / speed;
            Vec2 N(-T.y(), T.x());
            double kappa = cur.curvature(t[k]);
            if (kappa < 0) {
                N = -N;
                kappa = -kappa;
            }
            const double rho = kappa > 1e-12 ? 1.0 / kappa : std::numeric_limits<double>::infinity();
            const double dist = (x - c).dot(N);
            if (dist < 0) {
                // point on the convex side: tangential term damped by d/(d - rho)
                add_term(first, d[0], T, dist / (dist - rho), x);
                add_term(first, d[0], N, 1.0, x);
            } else if (dist < rho) {
                add_term(first, d[0], N, 1.0, x);
            } else {
                // beyond the curvature centre the model is singular; use point distance
                add_term(first, d[0], Vec2::UnitX(), 1.0, x);
                add_term(first, d[0], Vec2::UnitY(), 1.0, x);
            }
        }
        A.topLeftCorner(m, m) += smooth;
        A.bottomRightCorner(m, m) += smooth;
        A.diagonal().array() += 1e-9;
        const Eigen::VectorXd target = A.ldlt().solve(rhs);
        const Eigen::VectorXd p0 = flatten(cur);
        const Eigen::VectorXd step = target - p0;

        bool accepted = false;
        for (double s = 1.0; s >= 1e-4; s *= 0.5) {
            const BSplineCurve trial = unflatten(p0 + s * step, L);
            std::vector<double> tt;
            double e = 0;
            const double fn = evaluate(trial, tt, e);
            if (fn <= f) {
                cur = trial;
                t = std::move(tt);
                f = fn;
                err = e;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
        res.objective.push_back(f);
        res.max_error.push_back(err);
    }
    res.curve = cur;
    return res;
}

}  // namespace inkbot
