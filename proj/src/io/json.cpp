#include "inkbot/io/json.hpp"

namespace inkbot {

void to_json(json& j, const Viewpoint& v) {
    j = {{"eye", v.eye}, {"target", v.target}, {"up", v.up}, {"fovY", v.fov_y_deg},
         {"imageWidth", v.image_width}, {"imageHeight", v.image_height}};
}

void from_json(const json& j, Viewpoint& v) {
    read_opt(j, "eye", v.eye);
    read_opt(j, "target", v.target);
    read_opt(j, "up", v.up);
    read_opt(j, "fovY", v.fov_y_deg);
    read_opt(j, "imageWidth", v.image_width);
    read_opt(j, "imageHeight", v.image_height);
}

void to_json(json& j, const SimplifierConfig& c) {
    j = {{"blurSigma", c.blur_sigma}, {"threshold", c.binarize_threshold}, {"minComponentArea", c.min_component_area},
         {"pruneBranchLength", c.prune_branch_length}, {"gapCloseRadius", c.gap_close_radius}};
}

void from_json(const json& j, SimplifierConfig& c) {
    read_opt(j, "blurSigma", c.blur_sigma);
    read_opt(j, "threshold", c.binarize_threshold);
    read_opt(j, "minComponentArea", c.min_component_area);
    read_opt(j, "pruneBranchLength", c.prune_branch_length);
    read_opt(j, "gapCloseRadius", c.gap_close_radius);
}

void to_json(json& j, const ContourParams& p) {
    j = {{"scDerivativeThreshold", p.sc_derivative_threshold}, {"arThresholdScale", p.ar_threshold_scale}};
}

void from_json(const json& j, ContourParams& p) {
    read_opt(j, "scDerivativeThreshold", p.sc_derivative_threshold);
    read_opt(j, "arThresholdScale", p.ar_threshold_scale);
}

void to_json(json& j, const RasterPolyline& p) { j = {{"points", p.points}, {"closed", p.closed}}; }

void from_json(const json& j, RasterPolyline& p) {
    p.points = j.at("points").get<std::vector<Vec2>>();
    read_opt(j, "closed", p.closed);
}

void to_json(json& j, const Candidate& c) {
    j = {{"family", to_string(c.family)}, {"outside", c.outside}, {"closed", c.poly.closed}, {"points", c.poly.points}};
}

void from_json(const json& j, Candidate& c) {
    c.family = contour_family_from_string(j.at("family").get<std::string>());
    read_opt(j, "outside", c.outside);
    read_opt(j, "closed", c.poly.closed);
    c.poly.points = j.at("points").get<std::vector<Vec2>>();
}

void to_json(json& j, const EditableStroke& s) {
    j = {{"id", s.id}, {"points", s.points}, {"source", to_string(s.source)}, {"style", to_string(s.style)},
         {"candidate", s.candidate ? json(*s.candidate) : json(nullptr)}, {"stale", s.stale}};
}

void from_json(const json& j, EditableStroke& s) {
    s.id = j.at("id").get<int>();
    s.points = j.at("points").get<std::vector<Vec2>>();
    if (j.contains("source")) s.source = stroke_source_from_string(j.at("source").get<std::string>());
    if (j.contains("style")) s.style = style_hint_from_string(j.at("style").get<std::string>());
    s.candidate.reset();
    if (j.contains("candidate") && !j.at("candidate").is_null()) s.candidate = j.at("candidate").get<int>();
    read_opt(j, "stale", s.stale);
}

void to_json(json& j, const DocumentParams& p) {
    j = {{"mu", p.mu}, {"tMin", p.t_min}, {"tMax", p.t_max}, {"smoothingSigma", p.smoothing_sigma}};
}

void from_json(const json& j, DocumentParams& p) {
    read_opt(j, "mu", p.mu);
    read_opt(j, "tMin", p.t_min);
    read_opt(j, "tMax", p.t_max);
    read_opt(j, "smoothingSigma", p.smoothing_sigma);
}

void to_json(json& j, const StrokeDocument& d) {
    j = {{"traces", d.traces}, {"candidates", d.candidates}, {"selected", d.selected}, {"params", d.params},
         {"view", d.view}, {"modelRef", d.model_ref}, {"nextId", d.next_id}};
}

void from_json(const json& j, StrokeDocument& d) {
    read_opt(j, "traces", d.traces);
    read_opt(j, "candidates", d.candidates);
    read_opt(j, "selected", d.selected);
    read_opt(j, "params", d.params);
    read_opt(j, "view", d.view);
    read_opt(j, "modelRef", d.model_ref);
    read_opt(j, "nextId", d.next_id);
}

void to_json(json& j, const EditOp& op) {
    j = {{"kind", to_string(op.kind)}};
    switch (op.kind) {
        case EditOp::Kind::Pick: j["candidate"] = op.candidate; break;
        case EditOp::Kind::Delete: j["id"] = op.a; break;
        case EditOp::Kind::Merge: j["a"] = op.a; j["b"] = op.b; break;
        case EditOp::Kind::Insert: j["points"] = op.points; break;
        case EditOp::Kind::Resplit: j["mu"] = op.mu; break;
        case EditOp::Kind::SetParams: j["tMin"] = op.t_min; j["tMax"] = op.t_max; break;
        case EditOp::Kind::SetStyle: j["id"] = op.a; j["style"] = to_string(op.style); break;
    }
}

void from_json(const json& j, EditOp& op) {
    op = EditOp{};
    op.kind = edit_kind_from_string(j.at("kind").get<std::string>());
    switch (op.kind) {
        case EditOp::Kind::Pick: op.candidate = j.at("candidate").get<int>(); break;
        case EditOp::Kind::Delete: op.a = j.at("id").get<int>(); break;
        case EditOp::Kind::Merge:
            op.a = j.at("a").get<int>();
            op.b = j.at("b").get<int>();
            break;
        case EditOp::Kind::Insert: op.points = j.at("points").get<std::vector<Vec2>>(); break;
        case EditOp::Kind::Resplit: op.mu = j.at("mu").get<double>(); break;
        case EditOp::Kind::SetParams:
            op.t_min = j.at("tMin").get<double>();
            op.t_max = j.at("tMax").get<double>();
            break;
        case EditOp::Kind::SetStyle:
            op.a = j.at("id").get<int>();
            op.style = style_hint_from_string(j.at("style").get<std::string>());
            break;
    }
}

void to_json(json& j, const FitConfig& c) {
    j = {{"alpha", c.alpha}, {"beta", c.beta}, {"iterations", c.iterations}, {"controlPoints", c.control_points}};
}

void from_json(const json& j, FitConfig& c) {
    read_opt(j, "alpha", c.alpha);
    read_opt(j, "beta", c.beta);
    read_opt(j, "iterations", c.iterations);
    read_opt(j, "controlPoints", c.control_points);
}

void to_json(json& j, const BSplineCurve& c) { j = {{"control", c.control_points()}, {"length", c.length()}}; }

void from_json(const json& j, BSplineCurve& c) {
    c = BSplineCurve(j.at("control").get<std::vector<Vec2>>(), j.at("length").get<double>());
}

void to_json(json& j, const OptimizedStroke& s) {
    j = {{"id", s.id}, {"curve", s.curve}, {"samples", s.samples}, {"thickness", s.thickness},
         {"style", to_string(s.style)}};
}

void from_json(const json& j, OptimizedStroke& s) {
    s.id = j.at("id").get<int>();
    s.curve = j.at("curve").get<BSplineCurve>();
    s.samples = j.at("samples").get<std::vector<Vec2>>();
    s.thickness = j.at("thickness").get<std::vector<double>>();
    s.style = style_hint_from_string(j.at("style").get<std::string>());
}

void to_json(json& j, const CalibrationModel& m) {
    j = {{"w", m.w}, {"b", m.b}, {"hTip", m.h_tip}, {"r2", m.r2}};
}

void from_json(const json& j, CalibrationModel& m) {
    read_opt(j, "w", m.w);
    read_opt(j, "b", m.b);
    read_opt(j, "hTip", m.h_tip);
    read_opt(j, "r2", m.r2);
}

void to_json(json& j, const InkStones& s) { j = {{"light", s.light}, {"thick", s.thick}, {"radius", s.radius}}; }

void from_json(const json& j, InkStones& s) {
    read_opt(j, "light", s.light);
    read_opt(j, "thick", s.thick);
    read_opt(j, "radius", s.radius);
}

void to_json(json& j, const WorkspaceFrame& f) {
    j = {{"center", f.center}, {"paperMin", f.paper_min}, {"paperMax", f.paper_max}, {"zPaper", f.z_paper},
         {"safeHeight", f.safe_height}, {"inkStones", f.stones}};
}

void from_json(const json& j, WorkspaceFrame& f) {
    read_opt(j, "center", f.center);
    read_opt(j, "paperMin", f.paper_min);
    read_opt(j, "paperMax", f.paper_max);
    read_opt(j, "zPaper", f.z_paper);
    read_opt(j, "safeHeight", f.safe_height);
    read_opt(j, "inkStones", f.stones);
}

void to_json(json& j, const MappedStroke& s) {
    std::vector<bool> clamped(s.clamped.begin(), s.clamped.end());
    j = {{"id", s.id},           {"points", s.points}, {"thickness", s.thickness}, {"descent", s.descent},
         {"z", s.z},             {"clamped", clamped}, {"style", to_string(s.style)}};
}

void from_json(const json& j, MappedStroke& s) {
    s.id = j.at("id").get<int>();
    s.points = j.at("points").get<std::vector<Vec2>>();
    s.thickness = j.at("thickness").get<std::vector<double>>();
    s.descent = j.at("descent").get<std::vector<double>>();
    s.z = j.at("z").get<std::vector<double>>();
    s.clamped.clear();
    for (bool c : j.at("clamped").get<std::vector<bool>>()) s.clamped.push_back(c ? 1 : 0);
    s.style = style_hint_from_string(j.at("style").get<std::string>());
}

void to_json(json& j, const MappedDocument& d) {
    j = {{"pxToMm", d.px_to_mm}, {"centroid", d.centroid_mm}, {"strokes", d.strokes}};
}

void from_json(const json& j, MappedDocument& d) {
    d.px_to_mm = j.at("pxToMm").get<double>();
    d.centroid_mm = j.at("centroid").get<Vec2>();
    d.strokes = j.at("strokes").get<std::vector<MappedStroke>>();
}

void to_json(json& j, const StyleParams& p) {
    j = {{"lambda", p.lambda}, {"tDip", p.t_dip}, {"brushLength", p.brush_length}, {"c1", p.c1},
         {"c2", p.c2},         {"c3", p.c3},      {"style", to_string(p.style)}};
}

void from_json(const json& j, StyleParams& p) {
    read_opt(j, "lambda", p.lambda);
    read_opt(j, "tDip", p.t_dip);
    read_opt(j, "brushLength", p.brush_length);
    read_opt(j, "c1", p.c1);
    read_opt(j, "c2", p.c2);
    read_opt(j, "c3", p.c3);
    if (j.contains("style")) p.style = style_hint_from_string(j.at("style").get<std::string>());
}

void to_json(json& j, const BrushAction& a) {
    j = {{"kind", to_string(a.kind)},       {"target", a.target}, {"dipDuration", a.dip_duration},
         {"dipDepth", a.dip_depth},         {"stone", a.stone}};
}

void from_json(const json& j, BrushAction& a) {
    a.kind = action_kind_from_string(j.at("kind").get<std::string>());
    read_opt(j, "target", a.target);
    read_opt(j, "dipDuration", a.dip_duration);
    read_opt(j, "dipDepth", a.dip_depth);
    read_opt(j, "stone", a.stone);
}

void to_json(json& j, const JointLimits& l) { j = json::array({l.lo, l.hi}); }

void from_json(const json& j, JointLimits& l) {
    l.lo = j.at(0).get<double>();
    l.hi = j.at(1).get<double>();
}

void to_json(json& j, const ArmModel& a) {
    j = {{"l1", a.l1},       {"l2", a.l2},       {"baseHeight", a.base_height}, {"limits", a.limits},
         {"vMax", a.v_max},  {"aMax", a.a_max},  {"drawSpeed", a.draw_speed},   {"travelSpeed", a.travel_speed}};
}

void from_json(const json& j, ArmModel& a) {
    read_opt(j, "l1", a.l1);
    read_opt(j, "l2", a.l2);
    read_opt(j, "baseHeight", a.base_height);
    read_opt(j, "limits", a.limits);
    read_opt(j, "vMax", a.v_max);
    read_opt(j, "aMax", a.a_max);
    read_opt(j, "drawSpeed", a.draw_speed);
    read_opt(j, "travelSpeed", a.travel_speed);
}

void to_json(json& j, const SimulatorParams& p) {
    j = {{"fullVolume", p.full_volume}, {"lightShade", p.light_shade},   {"scrapeKeep", p.scrape_keep},
         {"jitterMax", p.jitter_max},   {"minDeposit", p.min_deposit},   {"stampSpacingPx", p.stamp_spacing_px},
         {"seed", p.seed}};
}

void from_json(const json& j, SimulatorParams& p) {
    read_opt(j, "fullVolume", p.full_volume);
    read_opt(j, "lightShade", p.light_shade);
    read_opt(j, "scrapeKeep", p.scrape_keep);
    read_opt(j, "jitterMax", p.jitter_max);
    read_opt(j, "minDeposit", p.min_deposit);
    read_opt(j, "stampSpacingPx", p.stamp_spacing_px);
    read_opt(j, "seed", p.seed);
}

void to_json(json& j, const TurningPointMetric& m) {
    std::vector<bool> deg(m.degenerate.begin(), m.degenerate.end());
    j = {{"indices", m.indices}, {"theta", m.theta}, {"degenerate", deg}, {"meanAbsError", m.mean_abs_error}};
}

void from_json(const json& j, TurningPointMetric& m) {
    m.indices = j.at("indices").get<std::vector<int>>();
    m.theta = j.at("theta").get<std::vector<double>>();
    m.degenerate.clear();
    for (bool b : j.at("degenerate").get<std::vector<bool>>()) m.degenerate.push_back(b ? 1 : 0);
    read_opt(j, "meanAbsError", m.mean_abs_error);
}

}  // namespace inkbot
