#include "inkbot/optimize/stroke.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inkbot {

namespace {

// cumulative arc length on a dense parameter grid
void arc_table(const BSplineCurve& c, std::vector<double>& ts, std::vector<double>& s) {
    const int n = 256 * (c.size() - BSplineCurve::degree) + 1;
    ts.resize(n);
    s.assign(n, 0.0);
    Vec2 prev = c.eval(0.0);
    for (int i = 0; i < n; ++i) {
        ts[i] = c.length() * i / (n - 1);
        const Vec2 p = c.eval(ts[i]);
        if (i) s[i] = s[i - 1] + (p - prev).norm();
        prev = p;
    }
}

}  // namespace

double arc_length(const BSplineCurve& curve) {
    std::vector<double> ts, s;
    arc_table(curve, ts, s);
    return s.back();
}

std::vector<Vec2> resample_even(const BSplineCurve& curve, int n) {
    if (n < 2) throw InvalidInput("resample: need n >= 2");
    std::vector<double> ts, s;
    arc_table(curve, ts, s);
    std::vector<Vec2> out(n);
    out.front() = curve.eval(0.0);
    out.back() = curve.eval(curve.length());
    size_t j = 0;
    for (int i = 1; i + 1 < n; ++i) {
        const double target = s.back() * i / (n - 1);
        while (j + 2 < s.size() && s[j + 1] < target) ++j;
        const double seg = s[j + 1] - s[j];
        const double u = seg > 0 ? (target - s[j]) / seg : 0.0;
        out[i] = curve.eval(ts[j] + u * (ts[j + 1] - ts[j]));
    }
    return out;
}

int default_sample_count(double len) { return std::max(16, static_cast<int>(std::ceil(len / 2.0))); }

std::vector<double> assign_thickness(int count, double t_min, double t_max, double gamma) {
    if (count < 2) throw InvalidInput("thickness: need at least 2 samples");
    if (!(t_min > 0) || t_min > t_max) throw InvalidInput("thickness: need 0 < tMin <= tMax");
    const int n = count - 1;
    std::vector<double> t(count);
    for (int i = 0; i <= n; ++i) {
        const double x = 2.0 * std::min(i, n - i) / n;
        const double g = std::pow(x, gamma);
        t[i] = (1 - g) * t_min + g * t_max;
    }
    return t;
}

std::vector<Vec2> densify(const std::vector<Vec2>& pts, double max_gap) {
    std::vector<Vec2> out;
    for (size_t i = 0; i < pts.size(); ++i) {
        if (i) {
            const double d = (pts[i] - pts[i - 1]).norm();
            const int k = static_cast<int>(std::ceil(d / max_gap));
            for (int j = 1; j < k; ++j) out.push_back(pts[i - 1] + (pts[i] - pts[i - 1]) * (double(j) / k));
        }
        out.push_back(pts[i]);
    }
    return out;
}

namespace {

OptimizedStroke finish(const EditableStroke& stroke, const BSplineCurve& curve, const DocumentParams& params,
                       double gamma) {
    OptimizedStroke out;
    out.id = stroke.id;
    out.curve = curve;
    out.style = stroke.style;
    out.samples = resample_even(curve, default_sample_count(arc_length(curve)));
    out.thickness = assign_thickness(static_cast<int>(out.samples.size()), params.t_min, params.t_max, gamma);
    return out;
}

}  // namespace

OptimizedStroke optimize_stroke(const EditableStroke& stroke, const FitConfig& cfg, const DocumentParams& params,
                                double gamma) {
    const auto pts = densify(stroke.points);
    return finish(stroke, fit_sdm(pts, cfg).curve, params, gamma);
}

OptimizedStroke unoptimized_stroke(const EditableStroke& stroke, const FitConfig& cfg, const DocumentParams& params,
                                   double gamma) {
    const auto pts = densify(stroke.points);
    const int m = cfg.control_points ? cfg.control_points : default_control_points(pts.size());
    return finish(stroke, initial_curve(pts, m), params, gamma);
}

std::string debug_svg(const std::vector<Vec2>& points, const BSplineCurve& curve, int width, int height) {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    for (const Vec2& p : points)
        os << "<circle cx=\"" << p.x() << "\" cy=\"" << p.y() << "\" r=\"1\" fill=\"#888\"/>\n";
    os << "<polyline fill=\"none\" stroke=\"#3a7\" stroke-dasharray=\"3,2\" points=\"";
    for (const Vec2& p : curve.control_points()) os << p.x() << "," << p.y() << " ";
    os << "\"/>\n<polyline fill=\"none\" stroke=\"#c22\" points=\"";
    const int n = 40 * curve.size();
    for (int i = 0; i <= n; ++i) {
        const Vec2 p = curve.eval(curve.length() * i / n);
        os << p.x() << "," << p.y() << " ";
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

}  // namespace inkbot
