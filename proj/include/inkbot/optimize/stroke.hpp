#pragma once

#include "inkbot/editor/document.hpp"
#include "inkbot/optimize/sdm_fit.hpp"

#include <string>
#include <vector>

namespace inkbot {

struct OptimizedStroke {
    int id = 0;
    BSplineCurve curve;
    std::vector<Vec2> samples;     // px
    std::vector<double> thickness; // px
    StyleHint style = StyleHint::Plain;

    bool operator==(const OptimizedStroke&) const = default;
};

/// n points at equal arc-length spacing, first and last at the curve ends.
std::vector<Vec2> resample_even(const BSplineCurve& curve, int n);

double arc_length(const BSplineCurve& curve);

/// max(16, ceil(arc length / 2 px)).
int default_sample_count(double arc_length_px);

/// Thickness rising from t_min at both ends to t_max at the middle with
/// exponent gamma. Uses n = count - 1 and is exactly symmetric.
std::vector<double> assign_thickness(int count, double t_min, double t_max, double gamma = 0.6);

/// Inserts points so no gap exceeds max_gap (px).
std::vector<Vec2> densify(const std::vector<Vec2>& pts, double max_gap = 2.0);

/// Fit, resample and assign thickness for one stroke.
OptimizedStroke optimize_stroke(const EditableStroke& stroke, const FitConfig& cfg, const DocumentParams& params,
                                double gamma = 0.6);

/// Same pipeline with the unoptimized initial curve (used as the baseline
/// in fidelity comparisons).
OptimizedStroke unoptimized_stroke(const EditableStroke& stroke, const FitConfig& cfg, const DocumentParams& params,
                                   double gamma = 0.6);

/// Debug overlay: input points, control polygon and fitted curve.
std::string debug_svg(const std::vector<Vec2>& points, const BSplineCurve& curve, int width, int height);

}  // namespace inkbot
