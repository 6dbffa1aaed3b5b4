// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include "inkbot/pipeline/hash.hpp"
#include "inkbot/pipeline/report.hpp"
#include "inkbot/pipeline/stages.hpp"
#include "inkbot/simplify/simplify.hpp"
#include "test_util.hpp"

#include <iomanip>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

using namespace inkbot;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << "[failed: " << what << "] ";
        }
    }
};

using Criterion = std::function<void(Outcome&)>;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void calibration(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto m = fit_calibration(load_calibration_csv(testutil::data_dir() / "table1.csv"), 0);
    const double dt = seconds_since(t0);
    o.detail << "w=" << m.w << " b=" << m.b << " R2=" << m.r2 << " t=" << dt << "s ";
    o.check(std::abs(m.w - 1.178) <= 0.005, "w");
    o.check(std::abs(m.b + 0.801) <= 0.02, "b");
    o.check(std::abs(m.r2 - 0.957) <= 0.005, "R2");
    o.check(dt < 1.0, "runtime");
}

void sdm_convergence(Outcome& o) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto fx = s_curve_fixture();
    auto run = [&](int it) {
        FitConfig cfg;
        cfg.iterations = it;
        return fit_sdm(fx.points, cfg);
    };
    const auto r15 = run(15);
    const double e1 = run(1).max_error.back(), e5 = run(5).max_error.back(), e15 = r15.max_error.back();
    const double dt = seconds_since(t0);
    bool monotone = true;
    for (size_t i = 1; i < r15.objective.size(); ++i) monotone &= r15.objective[i] <= r15.objective[i - 1];
    o.detail << "maxdist@1=" << e1 << " @5=" << e5 << " @15=" << e15 << " t=" << dt << "s ";
    o.check(monotone, "objective non-increasing");
    o.check(e15 <= 1.5, "distance after 15 iterations");
    o.check(e15 < e1 && e15 < e5, "strictly below 1 and 5 iterations");
    o.check(dt < 5.0, "runtime");
}

void gradient(Outcome& o) {
    const auto fx = s_curve_fixture();
    const auto base = initial_curve(fx.points, default_control_points(fx.points.size()));
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0, 3);
    double worst = 0;
    for (int trial = 0; trial < 10; ++trial) {
        auto ctrl = base.control_points();
        for (auto& c : ctrl) c += Vec2(noise(rng), noise(rng));
        const BSplineCurve c(ctrl, base.length());
        const double a = 1e-4, b = 1e-4, h = 1e-5;
        const Eigen::VectorXd g = sdm_gradient(c, fx.points, a, b);
        Eigen::VectorXd fd(g.size());
        const int m = c.size();
        for (int i = 0; i < m; ++i)
            for (int d = 0; d < 2; ++d) {
                auto plus = ctrl, minus = ctrl;
                plus[i][d] += h;
                minus[i][d] -= h;
                fd(d * m + i) = (sdm_objective(BSplineCurve(plus, c.length()), fx.points, a, b) -
                                 sdm_objective(BSplineCurve(minus, c.length()), fx.points, a, b)) /
                                (2 * h);
            }
        worst = std::max(worst, (g - fd).norm() / fd.norm());
    }
    o.detail << "max relative error=" << worst << " ";
    o.check(worst <= 1e-5, "relative error");
}

void thickness(Outcome& o) {
    const int n = 100;
    const auto t = assign_thickness(n + 1, 4, 25, 0.6);
    bool symmetric = true;
    for (int i = 0; i <= n; ++i) symmetric &= t[i] == t[n - i];
    o.detail << "t0=" << t[0] << " tn/2=" << t[n / 2] << " tn/4=" << t[n / 4] << " ";
    o.check(t[0] == 4 && t[n] == 4, "ends");
    o.check(t[n / 2] == 25, "middle");
    o.check(symmetric, "exact symmetry");
    o.check(std::abs(t[n / 4] - 17.86) <= 0.01, "quarter value");
}

void corners(Outcome& o) {
    BinaryImage sq(240, 240);
    raster::draw_line(sq, 20, 20, 220, 20);
    raster::draw_line(sq, 220, 20, 220, 220);
    raster::draw_line(sq, 220, 220, 20, 220);
    raster::draw_line(sq, 20, 220, 20, 20);
    const auto square = trace_contours(to_contour_image(raster::thin(sq)));

    BinaryImage ci(240, 240);
    int px = -1, py = -1;
    for (int i = 0; i <= 4000; ++i) {
        const double a = 2 * std::numbers::pi * i / 4000;
        const int x = static_cast<int>(std::lround(120 + 90 * std::cos(a)));
        const int y = static_cast<int>(std::lround(120 + 90 * std::sin(a)));
        if (px >= 0) raster::draw_line(ci, px, py, x, y);
        px = x;
        py = y;
    }
    const auto circle = trace_contours(to_contour_image(raster::thin(ci)));
    if (square.size() != 1 || circle.size() != 1) {
        o.check(false, "tracing");
        return;
    }
    const CornerParams p;
    const size_t ns = detect_corners(square[0], p).size(), nc = detect_corners(circle[0], p).size();
    o.detail << "square=" << ns << " circle=" << nc << " counts over mu:";

    RasterPolyline s_curve;
    s_curve.points = s_curve_fixture().points;
    bool monotone = true;
    for (const RasterPolyline* poly : {&square[0], static_cast<const RasterPolyline*>(&s_curve)}) {
        size_t prev = SIZE_MAX;
        for (double mu : {40.0, 80.0, 160.0, 320.0}) {
            CornerParams q;
            q.split_ratio = mu;
            const size_t k = detect_corners(*poly, q).size();
            o.detail << " " << k;
            monotone &= k <= prev;
            prev = k;
        }
        o.detail << " |";
    }
    o.detail << " ";
    o.check(ns == 4, "square");
    o.check(nc == 0, "circle");
    o.check(monotone, "non-increasing in mu");
}

void styles(Outcome& o) {
    StyleParams p;
    p.t_dip = 0;
    const double d0 = noutan_degree(p);
    p.t_dip = 20.0 / p.c1;
    const double dinf = noutan_degree(p);
    const auto rows = style_sweep();
    bool mono = rows.size() == 12;
    for (const auto& a : rows)
        for (const auto& b : rows) {
            if ((a.lambda == b.lambda && a.t_dip < b.t_dip) || (a.t_dip == b.t_dip && a.lambda < b.lambda))
                mono &= a.noutan < b.noutan && a.kasure > b.kasure;
        }
    o.detail << "D(0)=" << d0 << " |D(20/c1)-lambda|=" << std::abs(dinf - p.lambda) << " sweep=" << rows.size() << " ";
    o.check(d0 == 0, "D_noutan(0)");
    o.check(std::abs(dinf - p.lambda) <= 1e-6, "asymptote");
    o.check(mono, "strict monotonicity over 12 combinations");
}

void kinematics(Outcome& o) {
    const ArmModel arm;
    std::mt19937_64 rng(77);
    // elbow-up half of the workspace
    std::uniform_real_distribution<double> base(-130, 130), shoulder(-25, 115), elbow(-165, 0);
    double worst = 0;
    int n = 0, failures = 0;
    while (n < 1000) {
        const JointPose q{base(rng), shoulder(rng), elbow(rng), 0};
        if (!within_limits(arm, q)) continue;
        const Vec3 p = forward_kinematics(arm, q);
        ++n;
        try {
            worst = std::max(worst, (forward_kinematics(arm, inverse_kinematics(arm, p)) - p).norm());
        } catch (const KinematicsError&) {
            ++failures;
        }
    }

    std::mt19937_64 rng2(78);
    std::uniform_real_distribution<double> len(0.0, 400), v(50, 200), a(100, 3000);
    double worst_len = 0;
    bool bounded = true;
    for (int t = 0; t < 500; ++t) {
        const double L = len(rng2), vm = v(rng2), am = a(rng2);
        const auto prof = plan_segment(L, vm, am);
        worst_len = std::max(worst_len, std::abs(prof.distance_at(prof.duration()) - L));
        const int steps = 2000;
        const double dt = prof.duration() / steps;
        double prev = prof.speed_at(0);
        for (int i = 1; i <= steps && dt > 0; ++i) {
            const double cur = prof.speed_at(i * dt);
            bounded &= cur <= vm + 1e-9 && std::abs(cur - prev) <= am * dt * (1 + 1e-9) + 1e-12;
            prev = cur;
        }
        bounded &= prof.v_peak <= vm + 1e-12 && prof.accel <= am + 1e-12;
    }

    // compiled draw segments cruise inside the drawing speed range
    const Bench bench;
    const auto fx = s_curve_fixture();
    OptimizedStroke s;
    s.id = 1;
    s.samples = fx.points;
    s.thickness.assign(s.samples.size(), 8);
    const auto mapped = map_strokes({s}, 0, bench.frame, bench.model);
    const auto prog = compile_program(mapped, StyleParams{}, bench.arm, bench.frame, bench.model);
    bool speeds = bench.arm.draw_speed >= 50 && bench.arm.draw_speed <= 120;
    for (const auto& seg : prog.segments)
        if (seg.role == SegmentRole::Draw) speeds &= seg.profile.v_peak >= 50 && seg.profile.v_peak <= 120;
    ArmModel fast;
    fast.draw_speed = 130;
    try {
        fast.validate();
        speeds = false;
    } catch (const InvalidInput&) {
    }
    o.detail << "FK(IK) max error=" << worst << "mm IK failures=" << failures << " length error=" << worst_len << " ";
    o.check(failures == 0 && worst < 1e-6, "round trip");
    o.check(worst_len <= 1e-9, "profile integral");
    o.check(bounded, "v/a bounds");
    o.check(speeds, "draw speed range");
}

void widths(Outcome& o) {
    const Bench bench;
    const auto table = reference_calibration_table();
    double band = 0;
    for (const auto& r : table.rows)
        band = std::max(band, std::abs(r.descent - (bench.model.w * r.thickness + bench.model.b)) / bench.model.w);
    // the worst row defines the band, so allow for the integration step
    const double slack = 1e-3;
    const double tol = band + slack;
    double prev = 0, worst = 0;
    bool increasing = true;
    o.detail << "widths:";
    for (const auto& r : table.rows) {
        const double w = constant_descent_width(r.descent, bench);
        o.detail << " " << std::round(w * 100) / 100;
        increasing &= w > prev;
        worst = std::max(worst, std::abs(w - r.thickness));
        prev = w;
    }
    o.detail << std::setprecision(6) << " max|w-t|=" << worst << " band=" << band << "+" << slack << " ";
    o.check(increasing, "strictly increasing");
    o.check(worst <= tol, "residual band");
}

void contingence(Outcome& o) {
    const auto r = contingence_experiment({2, 4, 6, 8, 10});
    bool ok = r.rows.size() == 5;
    for (const auto& row : r.rows) {
        o.detail << "d" << row.offset << ":" << std::round(row.optimized.mean_abs_error * 100) / 100 << "<="
                 << std::round(row.unoptimized.mean_abs_error * 100) / 100 << " ";
        ok &= row.optimized.mean_abs_error <= row.unoptimized.mean_abs_error;
    }
    o.detail << "mean " << r.mean_optimized << " vs " << r.mean_unoptimized << " ";
    o.check(ok, "optimized <= unoptimized at every offset");
}

void kasure(Outcome& o) {
    const Bench bench;
    const auto dry = kasure_stroke_profile(1.0 / 6, 0.5, bench);
    const auto wet = kasure_stroke_profile(0.5, 3.0, bench);
    const auto dry2 = kasure_stroke_profile(1.0 / 6, 0.5, bench);
    size_t gaps_last_quarter = 0, early_wet_gaps = 0;
    for (size_t i = 3 * dry.size() / 4; i < dry.size(); ++i) gaps_last_quarter += dry[i] <= 0;
    for (size_t i = 0; i < wet.size(); ++i)
        if (wet[i] <= 0 && i < wet.size() * 9 / 10) ++early_wet_gaps;
    o.detail << "low: " << gaps_last_quarter << " zero samples in final quarter; high: " << early_wet_gaps
             << " zero samples before final 10% ";
    o.check(gaps_last_quarter >= 1, "low stroke gap");
    o.check(early_wet_gaps == 0, "high stroke gaps only at the end");
    o.check(dry == dry2, "deterministic");
}

void teapot(Outcome& o) {
    const auto view = json::parse(read_file(testutil::data_dir() / "teapot_view.json")).get<Viewpoint>();
    std::string hashes[2];
    size_t strokes = 0;
    for (int run = 0; run < 2; ++run) {
        const auto dir = testutil::temp_dir("acceptance_teapot_" + std::to_string(run));
        Project p = create_project(dir, "teapot", testutil::data_dir() / "teapot.obj", view);
        p.auto_pick_min_length = 40;
        p.sim.seed = 1;
        run_through(p, Stage::Simulate);
        int w = 0, h = 0;
        const auto gray = read_gray8_png(p.path("artifacts/canvas.png"), w, h);
        hashes[run] = sha256_hex(std::string_view(reinterpret_cast<const char*>(gray.data()), gray.size()));
        strokes = load_strokes(p).size();
    }
    o.detail << "canvas " << hashes[0].substr(0, 12) << " / " << hashes[1].substr(0, 12) << " strokes=" << strokes << " ";
    o.check(hashes[0] == hashes[1], "identical canvas hash");
    o.check(strokes >= 10 && strokes <= 80, "stroke count");
}

}  // namespace

int main() {
    const std::pair<const char*, Criterion> criteria[] = {
        {"calibration regression", calibration},
        {"SDM convergence", sdm_convergence},
        {"gradient check", gradient},
        {"thickness profile", thickness},
        {"corner detector", corners},
        {"style models", styles},
        {"kinematics", kinematics},
        {"simulator widths", widths},
        {"angle of contingence", contingence},
        {"kasure break-up", kasure},
        {"teapot determinism", teapot},
    };
    int failed = 0, index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            fn(o);
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double dt = seconds_since(t0);
        std::printf("%s criterion %2d (%s): %s(%.2f s)\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.str().c_str(), dt);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d of %d criteria passed\n", index - failed, index);
    return failed ? 1 : 0;
}
