#pragma once

#include "inkbot/pipeline/project.hpp"
#include "inkbot/simulator/metrics.hpp"

#include <vector>

namespace inkbot {

/// Setup shared by the drawing experiments.
struct Bench {
    WorkspaceFrame frame;
    CalibrationModel model = default_calibration();
    ArmModel arm;
    SimulatorParams sim;
    double px_per_mm = 10;
};

struct ContingenceRow {
    double offset;  // descent past tip contact, mm
    TurningPointMetric optimized;
    TurningPointMetric unoptimized;
};

struct ContingenceReport {
    std::vector<ContingenceRow> rows;
    double mean_optimized = 0;
    double mean_unoptimized = 0;
};

/// Draws the reference S-curve from the fitted and the unfitted spline at
/// each constant descent, recovers the drawn centerline and measures the
/// six turning angles against the reference.
ContingenceReport contingence_experiment(const std::vector<double>& offsets = {2, 4, 6, 8, 10},
                                         const Bench& bench = {});

/// Draws one plain S-curve stroke at a constant descent and returns the
/// measured metric; `optimized` selects the fitted spline.
TurningPointMetric draw_s_curve(double offset, bool optimized, const Bench& bench, CanvasRaster* canvas_out = nullptr);

/// Straight stroke of `length_mm` along robot y through the frame center at
/// a constant `width_mm`, prepared with a single thick-ink dip. Returns the
/// cross-section max density at 1 px steps.
std::vector<double> kasure_stroke_profile(double lambda, double t_dip, const Bench& bench, double length_mm = 120,
                                          double width_mm = 6, CanvasRaster* canvas_out = nullptr);

/// Plain straight stroke at constant descent; returns the deposited width
/// measured at its midpoint.
double constant_descent_width(double descent, const Bench& bench, double length_mm = 40);

struct StyleSweepRow {
    double lambda, t_dip, noutan, kasure;
};

/// 3 dipped ratios x 4 dip durations on a reference stroke.
std::vector<StyleSweepRow> style_sweep(const StyleParams& base = {});

/// Report JSON: contingence table, style sweep and, when the project has a
/// fresh simulation, its summary.
nlohmann::json build_report(const Project* project, const Bench& bench = {});

}  // namespace inkbot
