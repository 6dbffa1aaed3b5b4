#include "inkbot/pipeline/report.hpp"
#include "inkbot/simulator/metrics.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace inkbot;

namespace {

CalibrationModel table_model(double h_tip = 0) { return fit_calibration(reference_calibration_table(), h_tip); }

OptimizedStroke stroke_px(int id, std::vector<Vec2> samples, double thickness_px, StyleHint style = StyleHint::Plain) {
    OptimizedStroke s;
    s.id = id;
    s.style = style;
    s.thickness.assign(samples.size(), thickness_px);
    s.samples = std::move(samples);
    return s;
}

std::vector<Vec2> line_px(Vec2 a, Vec2 b, int n) {
    std::vector<Vec2> out;
    for (int i = 0; i < n; ++i) out.push_back(a + (b - a) * (static_cast<double>(i) / (n - 1)));
    return out;
}

int count_role(const RobotProgram& p, SegmentRole r) {
    return static_cast<int>(std::count_if(p.segments.begin(), p.segments.end(), [&](const Segment& s) { return s.role == r; }));
}

}  // namespace

// ---- calibration

TEST(Calibration, ReferenceTableFit) {
    const auto m = table_model();
    EXPECT_NEAR(m.w, 1.178, 0.005);
    EXPECT_NEAR(m.b, -0.801, 0.02);
    EXPECT_NEAR(m.r2, 0.957, 0.005);
}

TEST(Calibration, ExactLinearDataAndShuffleInvariance) {
    CalibrationTable t;
    for (double th : {1.0, 2.5, 4.0, 7.0}) t.rows.push_back({2 * th, th});
    const auto m = fit_calibration(t, 3.0);
    EXPECT_NEAR(m.w, 2, 1e-12);
    EXPECT_NEAR(m.b, 0, 1e-12);
    EXPECT_NEAR(m.r2, 1, 1e-12);
    EXPECT_EQ(m.h_tip, 3.0);

    auto shuffled = reference_calibration_table();
    std::mt19937 rng(3);
    std::shuffle(shuffled.rows.begin(), shuffled.rows.end(), rng);
    const auto a = table_model(), b = fit_calibration(shuffled, 0);
    EXPECT_NEAR(a.w, b.w, 1e-12);
    EXPECT_NEAR(a.b, b.b, 1e-12);
    EXPECT_NEAR(a.r2, b.r2, 1e-12);
}

TEST(Calibration, RecoversKnownLine) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.5, 20);
    for (int trial = 0; trial < 20; ++trial) {
        const double w = u(rng) / 4, b = u(rng) - 10;
        CalibrationTable t;
        for (int i = 0; i < 9; ++i) {
            const double th = 1 + 1.7 * i;
            t.rows.push_back({w * th + b, th});
        }
        const auto m = fit_calibration(t, 0);
        EXPECT_NEAR(m.w, w, 1e-9);
        EXPECT_NEAR(m.b, b, 1e-9);
    }
}

TEST(Calibration, RankDeficientRejected) {
    CalibrationTable t{{{2, 3}, {4, 3}, {6, 3}}};
    EXPECT_THROW(fit_calibration(t, 0), InvalidInput);
}

TEST(Calibration, CsvParsing) {
    const auto t = parse_calibration_csv("descent_mm,thickness_mm\r\n2,3\r\n# comment\n4,4\n\n6,5\n");
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[2], (CalibrationRow{6, 5}));
    EXPECT_THROW(parse_calibration_csv("descent_mm,thickness_mm\n2,3\nx,4\n"), InvalidInput);
    EXPECT_THROW(parse_calibration_csv("descent_mm,thickness_mm\n2;3\n4;4\n"), InvalidInput);
    EXPECT_THROW(parse_calibration_csv("2,3\n4,-1\n"), InvalidInput);

    const auto file = load_calibration_csv(testutil::data_dir() / "table1.csv");
    EXPECT_EQ(file.rows, reference_calibration_table().rows);
    EXPECT_EQ(parse_calibration_csv(to_csv(file)).rows, file.rows);
}

TEST(Calibration, ThicknessToDescent) {
    const auto m = table_model();
    EXPECT_NEAR(thickness_to_descent(m, 10.5).h, m.w * 10.5 + m.b, 1e-12);
    EXPECT_NEAR(thickness_to_descent(m, 10.5).h, 11.57, 0.03);
    const auto tiny = thickness_to_descent(m, 1e-6);
    EXPECT_TRUE(tiny.clamped);
    EXPECT_EQ(tiny.h, m.h_tip);
    const CalibrationModel unit{1, 0, 5, 1};
    EXPECT_EQ(thickness_to_descent(unit, 3).h, 8);
    EXPECT_FALSE(thickness_to_descent(unit, 3).clamped);
}

TEST(Calibration, FootprintWidthInvertsLine) {
    const auto m = table_model(25);
    // descent 10 mm past contact: Table I measured 10.5 mm
    double band = 0;
    for (auto& r : reference_calibration_table().rows)
        band = std::max(band, std::abs(r.descent - (m.w * r.thickness + m.b)) / m.w);
    EXPECT_NEAR(footprint_width(35, m), 10.5, band);
    EXPECT_EQ(footprint_width(24, m), 0.0);
    EXPECT_GE(footprint_width(25, m), 0.0);
    EXPECT_NEAR(footprint_width(25, m), -m.b / m.w, 1e-12);
    const CalibrationModel unit{1, 0, 0, 1};
    EXPECT_DOUBLE_EQ(footprint_width(7.5, unit), 7.5);
    // round trip through the descent model stays inside the residual band
    for (auto& r : reference_calibration_table().rows)
        EXPECT_LE(std::abs(footprint_width(thickness_to_descent(m, r.thickness).h, m) - r.thickness), 1e-9);
}

// ---- position mapping

TEST(Mapping, CentroidLandsOnFrameCenter) {
    const WorkspaceFrame frame;
    const auto m = table_model(25);
    const auto doc = map_strokes({stroke_px(1, {{10, 10}, {30, 10}, {20, 40}}, 4)}, 0.5, frame, m);
    // centroid (20, 20) is not a sample; add one sitting on it
    const auto doc2 = map_strokes({stroke_px(1, {{10, 10}, {20, 20}, {30, 30}}, 4)}, 0.5, frame, m);
    EXPECT_LT((doc2.strokes[0].points[1] - frame.center).norm(), 1e-12);
    EXPECT_LT((doc.centroid_mm - Vec2(10, 10)).norm(), 1e-12);
}

TEST(Mapping, SymmetryStepAndDistances) {
    const WorkspaceFrame frame;
    const auto m = table_model(25);
    const auto doc = map_strokes({stroke_px(1, {{0, 0}, {1, 0}, {40, 17}, {-20, 33}, {-21, -50}}, 4)}, 1.0, frame, m);
    const auto& p = doc.strokes[0].points;
    // unit step in sim x is a w step in robot y
    EXPECT_NEAR(p[1].y() - p[0].y(), m.w, 1e-12);
    EXPECT_NEAR(p[1].x() - p[0].x(), 0, 1e-12);
    const std::vector<Vec2> sim{{0, 0}, {1, 0}, {40, 17}, {-20, 33}, {-21, -50}};
    for (size_t i = 0; i < sim.size(); ++i)
        for (size_t j = 0; j < sim.size(); ++j)
            EXPECT_NEAR((p[i] - p[j]).norm(), m.w * (sim[i] - sim[j]).norm(), 1e-9);

    const auto sym = map_strokes({stroke_px(1, {{5, 9}, {-5, -9}}, 4)}, 1.0, frame, m);
    EXPECT_LT((sym.strokes[0].points[0] + sym.strokes[0].points[1] - 2 * frame.center).norm(), 1e-12);
}

TEST(Mapping, DocumentCentroidAndDescents) {
    const WorkspaceFrame frame;
    const auto m = table_model(25);
    const auto doc = map_strokes({stroke_px(1, line_px({0, 0}, {100, 0}, 11), 10),
                                  stroke_px(2, line_px({0, 80}, {100, 80}, 11), 10)},
                                 0, frame, m);
    // strokes keep their relative layout
    EXPECT_NEAR((doc.strokes[0].points[0] - doc.strokes[1].points[0]).norm(), 80 * doc.px_to_mm * m.w, 1e-9);
    for (const auto& s : doc.strokes) {
        for (const auto& q : s.points) EXPECT_TRUE(frame.contains(q));
        for (size_t i = 0; i < s.points.size(); ++i) {
            EXPECT_NEAR(s.thickness[i], 10 * doc.px_to_mm, 1e-12);
            EXPECT_NEAR(s.descent[i], m.w * s.thickness[i] + m.b, 1e-12);
            EXPECT_NEAR(s.z[i], frame.z_paper + m.h_tip - s.descent[i], 1e-12);
        }
    }
}

TEST(Mapping, OffPaperRejectedWithStrokeId) {
    const WorkspaceFrame frame;
    const auto m = table_model(25);
    try {
        map_strokes({stroke_px(1, {{1000, 0}, {1001, 1}}, 2), stroke_px(9, line_px({0, 0}, {2000, 0}, 5), 2)}, 1.0, frame, m);
        FAIL() << "expected a mapping error";
    } catch (const MappingError& e) {
        EXPECT_EQ(e.stroke_id, 9);
    }
}

// ---- ink styles

TEST(Styles, NoutanActionSequence) {
    const WorkspaceFrame frame;
    StyleParams p;
    const auto a = noutan_actions(frame, p);
    ASSERT_EQ(a.size(), 18u);
    const ActionKind cycle[4] = {ActionKind::Translate, ActionKind::Dip, ActionKind::Translate, ActionKind::Scrape};
    for (int n = 0; n < 4; ++n)
        for (int k = 0; k < 4; ++k) EXPECT_EQ(a[4 * n + k].kind, cycle[k]);
    EXPECT_EQ(a[16].kind, ActionKind::Translate);
    EXPECT_EQ(a[17].kind, ActionKind::Dip);
    EXPECT_EQ(a[17].target, frame.stones.thick);
    EXPECT_NEAR(a[17].dip_depth, p.lambda * p.brush_length, 1e-12);
    EXPECT_EQ(a[17].dip_duration, p.t_dip);
    // four distinct diagonal corners
    std::vector<Vec2> corners;
    for (int n = 0; n < 4; ++n) corners.push_back(a[4 * n + 3].target);
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j) EXPECT_GT((corners[i] - corners[j]).norm(), 1.0);
    EXPECT_EQ(noutan_actions(frame, p), a);

    WorkspaceFrame zero = frame;
    zero.stones.radius = 0;
    for (const auto& act : noutan_actions(zero, p))
        if (act.kind == ActionKind::Scrape) EXPECT_EQ(act.target, frame.stones.light);
}

TEST(Styles, ScrapeOffsets) {
    const double h = std::sqrt(2.0) / 2;
    // signs from (-1)^n and (-1)^floor(n/2)
    EXPECT_LT((scrape_offset(1, 1) - Vec2(-h, h)).norm(), 1e-12);
    EXPECT_LT((scrape_offset(2, 1) - Vec2(h, -h)).norm(), 1e-12);
    EXPECT_LT((scrape_offset(3, 1) - Vec2(-h, -h)).norm(), 1e-12);
    EXPECT_LT((scrape_offset(4, 1) - Vec2(h, h)).norm(), 1e-12);
    EXPECT_LT((scrape_offset(3, 20) - Vec2(-20 * h, -20 * h)).norm(), 1e-12);
}

TEST(Styles, NoutanDegree) {
    StyleParams p;
    p.t_dip = 0;
    EXPECT_EQ(noutan_degree(p), 0.0);
    p.t_dip = 2.5;
    EXPECT_NEAR(noutan_degree(p), (1 - std::exp(-2.5)) / 3, 1e-15);
    EXPECT_NEAR(noutan_degree(p), 0.3060, 5e-5);
    p.t_dip = 20.0 / p.c1;
    EXPECT_NEAR(noutan_degree(p), p.lambda, 1e-6);
}

TEST(Styles, KasureDegree) {
    StyleParams p;
    p.t_dip = 1;
    const auto d = kasure_degree({{0, 0}, {10, 0}}, {4, 6}, p);
    EXPECT_FALSE(d.infinite);
    EXPECT_NEAR(d.value, 50 / ((1.0 / 3) * (1 - std::exp(-1.0))), 1e-9);
    EXPECT_NEAR(d.value, 237.3, 0.05);
    EXPECT_EQ(kasure_degree({{3, 3}}, {5}, p).value, 0.0);
    EXPECT_EQ(kasure_degree({}, {}, p).value, 0.0);
    const auto doubled = kasure_degree({{0, 0}, {10, 0}, {10, 7}}, {8, 12, 6}, p);
    const auto base = kasure_degree({{0, 0}, {10, 0}, {10, 7}}, {4, 6, 3}, p);
    EXPECT_NEAR(doubled.value, 2 * base.value, 1e-9);
    p.t_dip = 0;
    const auto dry = kasure_degree({{0, 0}, {10, 0}}, {4, 6}, p);
    EXPECT_TRUE(dry.infinite);
    EXPECT_TRUE(std::isinf(dry.value));
    EXPECT_THROW(kasure_degree({{0, 0}, {1, 0}}, {4}, p), InvalidInput);
}

TEST(Styles, MonotonicSweep) {
    const auto rows = style_sweep();
    ASSERT_EQ(rows.size(), 12u);
    for (const auto& a : rows)
        for (const auto& b : rows) {
            if (a.lambda == b.lambda && a.t_dip < b.t_dip) {
                EXPECT_LT(a.noutan, b.noutan);
                EXPECT_GT(a.kasure, b.kasure);
            }
            if (a.t_dip == b.t_dip && a.lambda < b.lambda) {
                EXPECT_LT(a.noutan, b.noutan);
                EXPECT_GT(a.kasure, b.kasure);
            }
            EXPECT_LE(a.noutan, a.lambda);
        }
    StyleParams bad;
    bad.lambda = 0;
    EXPECT_THROW(noutan_degree(bad), InvalidInput);
}

// ---- kinematics

TEST(Kinematics, HomeAndBaseRotation) {
    ArmModel arm;
    const Vec3 home = forward_kinematics(arm, {});
    EXPECT_LT((home - Vec3(arm.l1 + arm.l2, 0, arm.base_height)).norm(), 1e-12);
    const Vec3 turned = forward_kinematics(arm, {90, 0, 0, 0});
    EXPECT_LT((turned - Vec3(0, arm.l1 + arm.l2, arm.base_height)).norm(), 1e-9);
    const JointPose full = inverse_kinematics(arm, home);
    EXPECT_NEAR(full.shoulder, 0, 1e-6);
    EXPECT_NEAR(full.elbow, 0, 1e-6);
    EXPECT_NEAR(full.base, 0, 1e-9);
}

TEST(Kinematics, InverseRoundTrip) {
    ArmModel arm;
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> base(-120, 120), shoulder(0, 90), elbow(-150, -5);
    double worst = 0;
    int n = 0;
    while (n < 1000) {
        const JointPose q{base(rng), shoulder(rng), elbow(rng), 0};
        if (!within_limits(arm, q)) continue;
        const Vec3 p = forward_kinematics(arm, q);
        const JointPose r = inverse_kinematics(arm, p);
        worst = std::max(worst, (forward_kinematics(arm, r) - p).norm());
        EXPECT_LE(r.elbow, 1e-9);  // elbow-up
        ++n;
    }
    EXPECT_LT(worst, 1e-6);
}

TEST(Kinematics, JacobianMatchesFiniteDifferences) {
    ArmModel arm;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-60, 60);
    for (int t = 0; t < 10; ++t) {
        const JointPose q{u(rng), u(rng) + 40, u(rng) - 60, 0};
        const Eigen::Matrix3d j = jacobian(arm, q);
        const double h = 1e-6;  // radians
        for (int c = 0; c < 3; ++c) {
            JointPose plus = q, minus = q;
            double* fp[3] = {&plus.base, &plus.shoulder, &plus.elbow};
            double* fm[3] = {&minus.base, &minus.shoulder, &minus.elbow};
            *fp[c] += h * 180 / std::numbers::pi;
            *fm[c] -= h * 180 / std::numbers::pi;
            const Vec3 fd = (forward_kinematics(arm, plus) - forward_kinematics(arm, minus)) / (2 * h);
            EXPECT_LT((fd - j.col(c)).norm(), 1e-5 * std::max(1.0, fd.norm()));
        }
    }
}

TEST(Kinematics, UnreachableAndLimits) {
    ArmModel arm;
    EXPECT_THROW(inverse_kinematics(arm, {arm.l1 + arm.l2 + 1, 0, arm.base_height}), KinematicsError);
    EXPECT_THROW(inverse_kinematics(arm, {-200, -1, 0}), KinematicsError);  // base beyond 135
    std::string why;
    EXPECT_FALSE(within_limits(arm, {0, 0, 50, 0}, &why));
    EXPECT_FALSE(why.empty());
    ArmModel fast = arm;
    fast.draw_speed = 150;
    EXPECT_THROW(fast.validate(), InvalidInput);
    fast.draw_speed = 40;
    EXPECT_THROW(fast.validate(), InvalidInput);
}

TEST(Trapezoid, ClosedFormExample) {
    const auto p = plan_segment(100, 100, 500);
    EXPECT_NEAR(p.t_acc, 0.2, 1e-12);
    EXPECT_NEAR(p.t_cruise, 0.8, 1e-12);
    EXPECT_NEAR(p.t_dec, 0.2, 1e-12);
    EXPECT_NEAR(p.duration(), 1.2, 1e-12);
    EXPECT_NEAR(p.distance_at(p.duration()), 100, 1e-9);
}

TEST(Trapezoid, TriangularBoundaryAndEmpty) {
    const auto b = plan_segment(100.0 * 100 / 500, 100, 500);
    EXPECT_NEAR(b.t_cruise, 0, 1e-12);
    EXPECT_NEAR(b.v_peak, 100, 1e-9);
    const auto tri = plan_segment(5, 100, 500);
    EXPECT_EQ(tri.t_cruise, 0);
    EXPECT_LT(tri.v_peak, 100);
    EXPECT_NEAR(tri.distance_at(tri.duration()), 5, 1e-9);
    EXPECT_TRUE(plan_segment(0, 100, 500).empty());
    EXPECT_EQ(plan_segment(0, 100, 500).duration(), 0);
    EXPECT_TRUE(plan_segment(Vec3(1, 2, 3), Vec3(1, 2, 3), 100, 500).empty());
}

TEST(Trapezoid, IntegralAndBounds) {
    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> len(0.01, 400), v(50, 120), a(200, 2000);
    for (int t = 0; t < 200; ++t) {
        const double L = len(rng), vm = v(rng), am = a(rng);
        const auto p = plan_segment(L, vm, am);
        EXPECT_NEAR(p.distance_at(p.duration()), L, 1e-9);
        // numerical integral of the speed
        const int steps = 20000;
        const double dt = p.duration() / steps;
        double s = 0, prev = p.speed_at(0);
        for (int i = 1; i <= steps; ++i) {
            const double cur = p.speed_at(i * dt);
            s += 0.5 * (prev + cur) * dt;
            EXPECT_LE(cur, vm + 1e-9);
            EXPECT_LE(std::abs(cur - prev) / dt, am * (1 + 1e-6));
            prev = cur;
        }
        EXPECT_NEAR(s, L, 1e-6 * std::max(1.0, L));
    }
}

// ---- program compilation

class ProgramTest : public ::testing::Test {
protected:
    WorkspaceFrame frame;
    CalibrationModel model = default_calibration();
    ArmModel arm;
    StyleParams style;

    MappedDocument map(std::vector<OptimizedStroke> strokes) { return map_strokes(strokes, 0.4, frame, model); }
};

TEST_F(ProgramTest, MinimalProgram) {
    const auto doc = map({stroke_px(1, {{0, 0}, {50, 0}}, 10)});
    const auto prog = compile_program(doc, style, arm, frame, model);
    ASSERT_EQ(prog.segments.size(), 4u);
    EXPECT_EQ(prog.segments[0].role, SegmentRole::Travel);
    EXPECT_EQ(prog.segments[1].role, SegmentRole::Descend);
    EXPECT_EQ(prog.segments[2].role, SegmentRole::Draw);
    EXPECT_EQ(prog.segments[3].role, SegmentRole::Lift);
    EXPECT_EQ(prog.segments[2].pen, PenState::Draw);
    for (const auto& s : prog.segments) EXPECT_EQ(s.joints.size(), s.waypoints.size());
    // travel and lift end at the safe height
    EXPECT_EQ(prog.segments[0].waypoints.back().z(), frame.safe_height);
    EXPECT_EQ(prog.segments[3].waypoints.back().z(), frame.safe_height);
    // continuity
    for (size_t i = 1; i < prog.segments.size(); ++i)
        EXPECT_EQ(prog.segments[i].waypoints.front(), prog.segments[i - 1].waypoints.back());
}

TEST_F(ProgramTest, TwoStrokesTwoCycles) {
    const auto doc = map({stroke_px(1, line_px({0, 0}, {50, 0}, 6), 8), stroke_px(2, line_px({0, 40}, {50, 60}, 6), 8)});
    const auto prog = compile_program(doc, style, arm, frame, model);
    EXPECT_EQ(count_role(prog, SegmentRole::Travel), 2);
    EXPECT_EQ(count_role(prog, SegmentRole::Descend), 2);
    EXPECT_EQ(count_role(prog, SegmentRole::Draw), 2);
    EXPECT_EQ(count_role(prog, SegmentRole::Lift), 2);
    EXPECT_EQ(count_role(prog, SegmentRole::Action), 0);
}

TEST_F(ProgramTest, NoutanPrepComesFirst) {
    const auto doc = map({stroke_px(1, line_px({0, 0}, {50, 0}, 6), 8, StyleHint::Noutan)});
    const auto prog = compile_program(doc, style, arm, frame, model);
    const auto actions = noutan_actions(frame, style);
    ASSERT_GE(prog.segments.size(), 22u);
    for (size_t i = 0; i < 18; ++i) {
        ASSERT_TRUE(prog.segments[i].action);
        EXPECT_EQ(*prog.segments[i].action, actions[i]);
    }
    EXPECT_EQ(prog.segments[18].role, SegmentRole::Travel);
    EXPECT_EQ(style_prep(StyleHint::Kasure, frame, style).size(), 2u);
    EXPECT_TRUE(style_prep(StyleHint::Plain, frame, style).empty());
}

TEST_F(ProgramTest, DrawFidelityAndSpeedBounds) {
    std::vector<Vec2> pts;
    for (int i = 0; i <= 60; ++i) pts.emplace_back(2.0 * i, 30 * std::sin(i / 8.0));
    OptimizedStroke s = stroke_px(3, pts, 6);
    s.thickness = assign_thickness(static_cast<int>(pts.size()), 4, 25);
    const auto doc = map({s});
    const auto prog = compile_program(doc, style, arm, frame, model);
    const Segment* draw = nullptr;
    for (const auto& seg : prog.segments)
        if (seg.role == SegmentRole::Draw) draw = &seg;
    ASSERT_NE(draw, nullptr);
    const auto& m = doc.strokes[0];
    ASSERT_EQ(draw->waypoints.size(), m.points.size());
    for (size_t i = 0; i < m.points.size(); ++i) {
        EXPECT_EQ(draw->waypoints[i].head<2>(), m.points[i]);
        EXPECT_EQ(draw->waypoints[i].z(), m.z[i]);
        EXPECT_EQ(draw->descent[i], m.descent[i]);
        EXPECT_LT((forward_kinematics(arm, draw->joints[i]) - draw->waypoints[i]).norm(), 1e-6);
    }
    for (const auto& seg : prog.segments) {
        EXPECT_LE(seg.profile.accel, arm.a_max + 1e-9);
        if (seg.role == SegmentRole::Draw) {
            EXPECT_LE(seg.profile.v_peak, 120);
            EXPECT_GE(arm.draw_speed, 50);
            EXPECT_LE(arm.draw_speed, 120);
            EXPECT_LE(seg.profile.v_peak, arm.draw_speed + 1e-9);
        }
    }
    EXPECT_GT(program_duration(prog), 0);
}

TEST_F(ProgramTest, JsonlRoundTripIsByteIdentical) {
    const auto doc = map({stroke_px(1, line_px({0, 0}, {50, 10}, 9), 8, StyleHint::Noutan),
                          stroke_px(2, line_px({0, 40}, {50, 60}, 6), 8, StyleHint::Kasure)});
    const auto prog = compile_program(doc, style, arm, frame, model);
    const std::string text = to_jsonl(prog);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), static_cast<long>(prog.segments.size()));
    const auto back = parse_jsonl(text);
    EXPECT_EQ(to_jsonl(back), text);
    EXPECT_EQ(compile_program(doc, style, arm, frame, model), prog);
    EXPECT_THROW(parse_jsonl("{\"role\": \"dance\"}\n"), std::exception);
}

TEST_F(ProgramTest, UnreachableWaypointsListed) {
    MappedStroke far;
    far.id = 5;
    far.points = {{500, 0}, {510, 0}};
    far.descent = {5, 5};
    far.z = {frame.z_paper - 5, frame.z_paper - 5};
    far.thickness = {5, 5};
    far.clamped = {0, 0};
    try {
        compile_program({{&far, {}}}, arm, frame, model);
        FAIL() << "expected a compile error";
    } catch (const CompileError& e) {
        EXPECT_FALSE(e.offending.empty());
    }
}

// ---- simulator

class SimulatorTest : public ::testing::Test {
protected:
    Bench bench;
};

TEST_F(SimulatorTest, EmptyProgramLeavesCanvas) {
    auto canvas = make_canvas(bench.frame);
    canvas.at(3, 4) = 0.5f;
    const auto before = canvas;
    BrushState brush = BrushState::full();
    execute_program({}, brush, canvas, StyleParams{}, bench.model, bench.sim);
    EXPECT_EQ(canvas, before);
}

TEST_F(SimulatorTest, OutsideCanvasRejected) {
    MappedStroke m;
    m.id = 1;
    m.points = {{bench.frame.paper_max.x() + 5, 0}, {bench.frame.paper_max.x() + 10, 0}};
    m.descent = {5, 5};
    m.z = {bench.frame.z_paper - 5, bench.frame.z_paper - 5};
    m.thickness = {5, 5};
    m.clamped = {0, 0};
    const auto prog = compile_program({{&m, {}}}, bench.arm, bench.frame, bench.model);
    auto canvas = make_canvas(bench.frame);
    BrushState brush = BrushState::full();
    EXPECT_THROW(execute_program(prog, brush, canvas, StyleParams{}, bench.model, bench.sim), InvalidInput);
}

TEST_F(SimulatorTest, WidthsFollowDescent) {
    const auto table = reference_calibration_table();
    double prev = 0, band = 0;
    for (const auto& r : table.rows)
        band = std::max(band, std::abs(r.descent - (bench.model.w * r.thickness + bench.model.b)) / bench.model.w);
    for (const auto& r : table.rows) {
        const double w = constant_descent_width(r.descent, bench);
        EXPECT_GT(w, prev) << "descent " << r.descent;
        // one canvas pixel of measurement resolution on top of the model band
        EXPECT_LE(std::abs(w - r.thickness), band + 1.0 / bench.px_per_mm) << "descent " << r.descent;
        prev = w;
    }
}

TEST_F(SimulatorTest, KasureBreaksUpWithLittleInk) {
    const auto dry = kasure_stroke_profile(1.0 / 6, 0.5, bench);
    const size_t n = dry.size();
    ASSERT_GT(n, 100u);
    size_t first_zero = n;
    for (size_t i = 0; i < n; ++i)
        if (dry[i] <= 0) {
            first_zero = i;
            break;
        }
    EXPECT_LT(first_zero, n);
    bool gap_in_last_quarter = false;
    for (size_t i = 3 * n / 4; i < n; ++i) gap_in_last_quarter |= dry[i] <= 0;
    EXPECT_TRUE(gap_in_last_quarter);
    // exhausted brush never deposits again
    for (size_t i = first_zero; i < n; ++i) EXPECT_EQ(dry[i], 0.0);

    const auto wet = kasure_stroke_profile(0.5, 3.0, bench);
    for (size_t i = 0; i < wet.size() * 9 / 10; ++i) EXPECT_GT(wet[i], 0.0) << "at " << i;

    EXPECT_EQ(kasure_stroke_profile(1.0 / 6, 0.5, bench), dry);
}

TEST_F(SimulatorTest, SeedOnlyChangesJitter) {
    CanvasRaster a, b, c;
    kasure_stroke_profile(1.0 / 6, 0.5, bench, 120, 6, &a);
    kasure_stroke_profile(1.0 / 6, 0.5, bench, 120, 6, &b);
    Bench other = bench;
    other.sim.seed = 99;
    kasure_stroke_profile(1.0 / 6, 0.5, other, 120, 6, &c);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}

TEST_F(SimulatorTest, InkConservation) {
    for (double lambda : {1.0 / 6, 1.0 / 3, 1.0 / 2})
        for (double t_dip : {0.5, 3.0}) {
            CanvasRaster canvas;
            kasure_stroke_profile(lambda, t_dip, bench, 120, 6, &canvas);
            const double loaded = lambda * (1 - std::exp(-t_dip)) * bench.sim.full_volume;
            const double deposited = canvas.total() / (canvas.px_per_mm * canvas.px_per_mm);
            EXPECT_LE(deposited, loaded + 1e-6) << lambda << " " << t_dip;
            for (float d : canvas.density) {
                ASSERT_GE(d, 0.0f);
                ASSERT_LE(d, 1.0f);
            }
        }
}

TEST_F(SimulatorTest, CanvasPngGray) {
    CanvasRaster canvas(4, 2, 10, {0, 0});
    canvas.at(1, 0) = 1.0f;
    canvas.at(2, 1) = 0.5f;
    const auto g = canvas_gray(canvas);
    ASSERT_EQ(g.size(), 8u);
    EXPECT_EQ(g[0], 255);
    EXPECT_EQ(g[1], 0);
    EXPECT_EQ(g[6], 128);
    const auto dir = testutil::temp_dir("canvas_png");
    write_canvas_png(canvas, dir / "c.png");
    EXPECT_TRUE(std::filesystem::exists(dir / "c.png"));
}

// ---- evaluation metric

TEST(Contingence, RightAngleAndStraight) {
    std::vector<Vec2> l;
    for (int i = 0; i <= 10; ++i) l.emplace_back(i, 0);
    for (int i = 1; i <= 10; ++i) l.emplace_back(10, i);
    auto m = angle_of_contingence(l, {10});
    EXPECT_NEAR(m.theta[0], 90, 1e-9);
    EXPECT_FALSE(m.degenerate[0]);

    std::vector<Vec2> s;
    for (int i = 0; i <= 20; ++i) s.emplace_back(i, 0);
    m = angle_of_contingence(s, {10});
    EXPECT_EQ(m.theta[0], 180);
    EXPECT_TRUE(m.degenerate[0]);
    EXPECT_THROW(angle_of_contingence(s, {0}), InvalidInput);
    EXPECT_THROW(angle_of_contingence(s, {20}), InvalidInput);
}

TEST(Contingence, FixtureReproducesReferenceAngles) {
    const auto fx = s_curve_fixture();
    ASSERT_EQ(fx.points.size(), 141u);
    const std::vector<double> ref{135, 93, 130, 81, 148, 150};
    EXPECT_EQ(fx.angles, ref);
    const auto m = angle_of_contingence(fx.points, fx.corners, fx.angles);
    for (size_t i = 0; i < ref.size(); ++i) {
        EXPECT_NEAR(m.theta[i], ref[i], 2.0);
        EXPECT_GT(m.theta[i], 0);
        EXPECT_LT(m.theta[i], 180);
    }
    EXPECT_LT(m.mean_abs_error, 2.0);
    for (size_t i = 1; i < fx.points.size(); ++i) EXPECT_NEAR((fx.points[i] - fx.points[i - 1]).norm(), 2.0, 1e-9);
}

TEST(Centerline, StraightStrokeIsCollinear) {
    CanvasRaster c(200, 60, 10, {0, 0});
    for (int y = 27; y <= 33; ++y)
        for (int x = 20; x < 180; ++x) c.at(x, y) = 1.0f;
    const auto line = extract_drawn_centerline(c, Vec2(20, 30));
    ASSERT_GT(line.size(), 100u);
    EXPECT_LT(line.front().x(), line.back().x());
    for (const auto& p : line) EXPECT_NEAR(p.y(), 30.5, 1.0);
}

TEST(Centerline, RejectsEmptyAndTwoStrokes) {
    CanvasRaster c(100, 100, 10, {0, 0});
    EXPECT_THROW(extract_drawn_centerline(c), InvalidInput);
    for (int x = 10; x < 90; ++x) {
        c.at(x, 20) = c.at(x, 21) = 1.0f;
        c.at(x, 70) = c.at(x, 71) = 1.0f;
    }
    EXPECT_THROW(extract_drawn_centerline(c), InvalidInput);
}

TEST(Centerline, DrawnSCurveHasSixTurningPoints) {
    const Bench bench;
    CanvasRaster canvas;
    const auto m = draw_s_curve(4, true, bench, &canvas);
    ASSERT_EQ(m.theta.size(), 6u);
    // each recovered angle sits at a genuine bend, not on a straight run
    for (size_t i = 0; i < 6; ++i) {
        EXPECT_FALSE(m.degenerate[i]);
        EXPECT_LT(m.theta[i], 170);
    }
    // turning points come out in drawing order
    for (size_t i = 1; i < 6; ++i) EXPECT_GT(m.indices[i], m.indices[i - 1]);
}

TEST(Contingence, OptimizedNoWorseAtEveryOffset) {
    const auto r = contingence_experiment({2, 6, 10});
    for (const auto& row : r.rows)
        EXPECT_LE(row.optimized.mean_abs_error, row.unoptimized.mean_abs_error) << "offset " << row.offset;
}
