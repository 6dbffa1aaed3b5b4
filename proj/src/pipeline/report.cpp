#include "inkbot/pipeline/report.hpp"

#include "inkbot/pipeline/stages.hpp"

#include <cmath>
#include <limits>

namespace inkbot {

namespace {

void simulate(const RobotProgram& prog, const StyleParams& style, const Bench& bench, CanvasRaster& canvas) {
    canvas = make_canvas(bench.frame, bench.px_per_mm);
    BrushState brush = BrushState::full();
    execute_program(prog, brush, canvas, style, bench.model, bench.sim);
}

MappedStroke constant_stroke(std::vector<Vec2> points, double descent, StyleHint style, const Bench& bench) {
    MappedStroke m;
    m.id = 1;
    m.style = style;
    m.points = std::move(points);
    const double h = descent + bench.model.h_tip;
    for (size_t i = 0; i < m.points.size(); ++i) {
        m.thickness.push_back(footprint_width(h, bench.model));
        m.descent.push_back(descent);
        m.z.push_back(tool_z(bench.frame, bench.model, h));
        m.clamped.push_back(0);
    }
    return m;
}

}  // namespace

TurningPointMetric draw_s_curve(double offset, bool optimized, const Bench& bench, CanvasRaster* canvas_out) {
    const SCurveFixture fx = s_curve_fixture();
    EditableStroke es;
    es.id = 1;
    es.points = fx.points;
    const DocumentParams params;
    const FitConfig cfg;
    const OptimizedStroke stroke = optimized ? optimize_stroke(es, cfg, params) : unoptimized_stroke(es, cfg, params);

    // Corners and the fitted samples share the document centroid of the
    // drawn samples, so both land in the same robot coordinates.
    OptimizedStroke raw;
    raw.samples = fx.points;
    const double px_to_mm = default_px_to_mm({raw}, bench.frame, bench.model);
    const MappedDocument mapped = map_strokes({stroke}, px_to_mm, bench.frame, bench.model);
    const double scale = mapped.px_to_mm;
    const MappedStroke drawn =
        constant_stroke(mapped.strokes.front().points, offset, StyleHint::Plain, bench);

    const StyleParams style;
    const RobotProgram prog = compile_program({{&drawn, {}}}, bench.arm, bench.frame, bench.model);
    CanvasRaster canvas;
    simulate(prog, style, bench, canvas);

    const Vec2 start_px = canvas.to_px(drawn.points.front());
    const std::vector<Vec2> center = extract_drawn_centerline(canvas, start_px);
    // Sample spacing matches the fixture's 2 px step after mapping.
    const double spacing_px = 2.0 * scale * bench.model.w * canvas.px_per_mm;
    const std::vector<Vec2> samples = resample_polyline(center, spacing_px);

    std::vector<int> turning;
    for (int c : fx.corners) {
        const Vec2 corner_mm = map_point(scale * fx.points[c], mapped.centroid_mm, bench.frame, bench.model.w);
        const Vec2 corner_px = canvas.to_px(corner_mm);
        int best = 1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int i = 1; i + 1 < static_cast<int>(samples.size()); ++i) {
            const double d = (samples[i] - corner_px).norm();
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        turning.push_back(best);
    }
    if (canvas_out) *canvas_out = canvas;
    return angle_of_contingence(samples, turning, fx.angles);
}

ContingenceReport contingence_experiment(const std::vector<double>& offsets, const Bench& bench) {
    ContingenceReport r;
    for (double d : offsets) {
        ContingenceRow row{d, draw_s_curve(d, true, bench), draw_s_curve(d, false, bench)};
        r.mean_optimized += row.optimized.mean_abs_error;
        r.mean_unoptimized += row.unoptimized.mean_abs_error;
        r.rows.push_back(std::move(row));
    }
    if (!offsets.empty()) {
        r.mean_optimized /= offsets.size();
        r.mean_unoptimized /= offsets.size();
    }
    return r;
}

std::vector<double> kasure_stroke_profile(double lambda, double t_dip, const Bench& bench, double length_mm,
                                          double width_mm, CanvasRaster* canvas_out) {
    StyleParams style;
    style.lambda = lambda;
    style.t_dip = t_dip;
    style.style = StyleHint::Kasure;
    const Vec2 c = bench.frame.center;
    std::vector<Vec2> path;
    const int n = std::max(2, static_cast<int>(std::ceil(length_mm / 2.0)) + 1);
    for (int i = 0; i < n; ++i) path.emplace_back(c.x(), c.y() - 0.5 * length_mm + length_mm * i / (n - 1));
    const double descent = bench.model.w * width_mm + bench.model.b;
    const MappedStroke m = constant_stroke(path, descent, StyleHint::Kasure, bench);
    const RobotProgram prog =
        compile_program({{&m, kasure_actions(bench.frame, style)}}, bench.arm, bench.frame, bench.model);
    CanvasRaster canvas;
    simulate(prog, style, bench, canvas);
    auto profile = density_profile(canvas, path, 0.5 * width_mm + 1.0);
    if (canvas_out) *canvas_out = std::move(canvas);
    return profile;
}

double constant_descent_width(double descent, const Bench& bench, double length_mm) {
    const Vec2 c = bench.frame.center;
    const std::vector<Vec2> path{{c.x(), c.y() - 0.5 * length_mm}, {c.x(), c.y() + 0.5 * length_mm}};
    const MappedStroke m = constant_stroke(path, descent, StyleHint::Plain, bench);
    const RobotProgram prog = compile_program({{&m, {}}}, bench.arm, bench.frame, bench.model);
    CanvasRaster canvas;
    simulate(prog, StyleParams{}, bench, canvas);
    return deposited_width(canvas, c, Vec2(0, 1));
}

std::vector<StyleSweepRow> style_sweep(const StyleParams& base) {
    // Reference stroke: 100 mm long, 4 mm to 6 mm wide.
    const std::vector<Vec2> pts{{0, 0}, {50, 0}, {100, 0}};
    const std::vector<double> t{4, 6, 4};
    std::vector<StyleSweepRow> rows;
    for (double lambda : {1.0 / 6, 1.0 / 3, 1.0 / 2})
        for (double t_dip : {0.5, 1.0, 2.0, 3.0}) {
            StyleParams p = base;
            p.lambda = lambda;
            p.t_dip = t_dip;
            rows.push_back({lambda, t_dip, noutan_degree(p), kasure_degree(pts, t, p).value});
        }
    return rows;
}

nlohmann::json build_report(const Project* project, const Bench& bench) {
    json out;
    const ContingenceReport c = contingence_experiment({2, 4, 6, 8, 10}, bench);
    json rows = json::array();
    for (const auto& r : c.rows)
        rows.push_back({{"offset", r.offset}, {"optimized", r.optimized}, {"unoptimized", r.unoptimized}});
    out["contingence"] = {{"reference", s_curve_fixture().angles},
                          {"rows", rows},
                          {"meanOptimized", c.mean_optimized},
                          {"meanUnoptimized", c.mean_unoptimized}};

    json sweep = json::array();
    for (const auto& r : style_sweep())
        sweep.push_back({{"lambda", r.lambda}, {"tDip", r.t_dip}, {"noutan", r.noutan}, {"kasure", r.kasure}});
    out["styleSweep"] = sweep;

    if (project) {
        json st = json::object();
        for (Stage s : kStages) st[to_string(s)] = to_string(freshness(*project, s));
        out["project"] = {{"id", project->id}, {"stages", st}, {"selectedStrokes", project->editor.document().selected.size()}};
        if (freshness(*project, Stage::Simulate) == Freshness::Fresh) {
            const RobotProgram prog = load_program(*project);
            out["project"]["programSegments"] = prog.segments.size();
            out["project"]["programDuration"] = program_duration(prog);
            out["project"]["canvasHash"] = project->artifacts.at(Stage::Simulate).output_hash;
        }
    }
    return out;
}

}  // namespace inkbot
