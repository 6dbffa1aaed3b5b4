#include "inkbot/trajectory/program.hpp"

#include <json.hpp>

#include <sstream>

namespace inkbot {

using nlohmann::json;

std::string to_string(PenState p) { return p == PenState::Draw ? "draw" : "travel"; }

PenState pen_state_from_string(const std::string& s) {
    if (s == "draw") return PenState::Draw;
    if (s == "travel") return PenState::Travel;
    throw InvalidInput("unknown pen state: " + s);
}

std::string to_string(SegmentRole r) {
    switch (r) {
        case SegmentRole::Action: return "action";
        case SegmentRole::Travel: return "travel";
        case SegmentRole::Descend: return "descend";
        case SegmentRole::Draw: return "draw";
        case SegmentRole::Lift: return "lift";
    }
    return "travel";
}

SegmentRole segment_role_from_string(const std::string& s) {
    for (auto r : {SegmentRole::Action, SegmentRole::Travel, SegmentRole::Descend, SegmentRole::Draw, SegmentRole::Lift})
        if (to_string(r) == s) return r;
    throw InvalidInput("unknown segment role: " + s);
}

double Segment::path_length() const {
    double len = 0;
    for (size_t i = 1; i < waypoints.size(); ++i) len += (waypoints[i] - waypoints[i - 1]).norm();
    return len;
}

std::vector<BrushAction> style_prep(StyleHint style, const WorkspaceFrame& frame, const StyleParams& params) {
    switch (style) {
        case StyleHint::Noutan: return noutan_actions(frame, params);
        case StyleHint::Kasure: return kasure_actions(frame, params);
        case StyleHint::Plain: return {};
    }
    return {};
}

namespace {

Vec3 at(const Vec2& p, double z) { return {p.x(), p.y(), z}; }

class Builder {
public:
    Builder(const ArmModel& arm, const WorkspaceFrame& frame, const CalibrationModel& model)
        : arm_(arm), frame_(frame), model_(model), cur_(at(frame.center, frame.safe_height)) {}

    void add(Segment seg, double speed) {
        seg.waypoints.insert(seg.waypoints.begin(), cur_);
        const size_t index = program.segments.size();
        for (size_t i = 0; i < seg.waypoints.size(); ++i) {
            try {
                prev_ = inverse_kinematics(arm_, seg.waypoints[i], &prev_);
                seg.joints.push_back(prev_);
            } catch (const KinematicsError& e) {
                std::ostringstream os;
                os << "segment " << index << " waypoint " << i << ": " << e.what();
                failures.push_back(os.str());
                seg.joints.push_back(prev_);
            }
        }
        seg.profile = plan_segment(seg.path_length(), speed, arm_.a_max);
        cur_ = seg.waypoints.back();
        program.segments.push_back(std::move(seg));
    }

    void action(const BrushAction& a) {
        Segment s;
        s.role = SegmentRole::Action;
        s.action = a;
        const double safe = frame_.safe_height;
        const double contact = frame_.z_paper + model_.h_tip;
        switch (a.kind) {
            case ActionKind::Translate:
                s.waypoints = {at(a.target, safe)};
                break;
            case ActionKind::Dip:
                s.waypoints = {at(a.target, safe), at(a.target, contact - a.dip_depth), at(a.target, safe)};
                s.dwell = a.dip_duration;
                break;
            case ActionKind::Scrape:
                s.waypoints = {at(a.target, safe), at(a.target, contact), at(a.target, safe)};
                break;
        }
        add(std::move(s), arm_.travel_speed);
    }

    void stroke(const MappedStroke& m) {
        if (m.points.empty()) return;
        const double safe = frame_.safe_height;
        Segment travel;
        travel.role = SegmentRole::Travel;
        travel.stroke_id = m.id;
        travel.style = m.style;
        travel.waypoints = {at(m.points.front(), safe)};
        add(std::move(travel), arm_.travel_speed);

        Segment descend;
        descend.role = SegmentRole::Descend;
        descend.stroke_id = m.id;
        descend.style = m.style;
        descend.waypoints = {at(m.points.front(), m.z.front())};
        add(std::move(descend), arm_.travel_speed);

        Segment draw;
        draw.role = SegmentRole::Draw;
        draw.pen = PenState::Draw;
        draw.stroke_id = m.id;
        draw.style = m.style;
        for (size_t i = 1; i < m.points.size(); ++i) {
            draw.waypoints.push_back(at(m.points[i], m.z[i]));
            draw.descent.push_back(m.descent[i]);
        }
        if (draw.waypoints.empty()) {
            draw.waypoints.push_back(at(m.points.front(), m.z.front()));
            draw.descent.push_back(m.descent.front());
        }
        draw.descent.insert(draw.descent.begin(), m.descent.front());
        add(std::move(draw), arm_.draw_speed);

        Segment lift;
        lift.role = SegmentRole::Lift;
        lift.stroke_id = m.id;
        lift.style = m.style;
        lift.waypoints = {at(m.points.back(), safe)};
        add(std::move(lift), arm_.travel_speed);
    }

    RobotProgram program;
    std::vector<std::string> failures;

private:
    const ArmModel& arm_;
    const WorkspaceFrame& frame_;
    const CalibrationModel& model_;
    Vec3 cur_;
    JointPose prev_;
};

}  // namespace

RobotProgram compile_program(const std::vector<StrokePlan>& plans, const ArmModel& arm, const WorkspaceFrame& frame,
                             const CalibrationModel& model) {
    arm.validate();
    frame.validate(model.h_tip);
    Builder b(arm, frame, model);
    for (const auto& plan : plans) {
        for (const auto& a : plan.prep) b.action(a);
        b.stroke(*plan.stroke);
    }
    if (!b.failures.empty()) {
        std::string msg = "compile failed: " + std::to_string(b.failures.size()) + " unreachable waypoint(s); first: " +
                          b.failures.front();
        throw CompileError(msg, b.failures);
    }
    return b.program;
}

RobotProgram compile_program(const MappedDocument& doc, const StyleParams& params, const ArmModel& arm,
                             const WorkspaceFrame& frame, const CalibrationModel& model) {
    std::vector<StrokePlan> plans;
    for (const auto& s : doc.strokes) plans.push_back({&s, style_prep(s.style, frame, params)});
    return compile_program(plans, arm, frame, model);
}

double program_duration(const RobotProgram& program) {
    double t = 0;
    for (const auto& s : program.segments) t += s.profile.duration() + s.dwell;
    return t;
}

namespace {

json vec3_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

json segment_json(const Segment& s, size_t index) {
    json j;
    j["seg"] = index;
    j["role"] = to_string(s.role);
    j["pen"] = to_string(s.pen);
    j["stroke"] = s.stroke_id;
    j["style"] = to_string(s.style);
    json wp = json::array(), jt = json::array();
    for (const auto& p : s.waypoints) wp.push_back(vec3_json(p));
    for (const auto& q : s.joints) jt.push_back(json::array({q.base, q.shoulder, q.elbow, q.wrist}));
    j["waypoints"] = wp;
    j["joints"] = jt;
    j["descent"] = s.descent;
    j["profile"] = {{"length", s.profile.length}, {"v_peak", s.profile.v_peak}, {"accel", s.profile.accel},
                    {"t_acc", s.profile.t_acc},   {"t_cruise", s.profile.t_cruise}, {"t_dec", s.profile.t_dec}};
    j["dwell"] = s.dwell;
    if (s.action) {
        const auto& a = *s.action;
        j["action"] = {{"kind", to_string(a.kind)},
                       {"target", json::array({a.target.x(), a.target.y()})},
                       {"dip_duration", a.dip_duration},
                       {"dip_depth", a.dip_depth},
                       {"stone", a.stone}};
    } else {
        j["action"] = nullptr;
    }
    return j;
}

Segment segment_from_json(const json& j) {
    Segment s;
    s.role = segment_role_from_string(j.at("role").get<std::string>());
    s.pen = pen_state_from_string(j.at("pen").get<std::string>());
    s.stroke_id = j.at("stroke").get<int>();
    s.style = style_hint_from_string(j.at("style").get<std::string>());
    for (const auto& p : j.at("waypoints")) s.waypoints.emplace_back(p.at(0).get<double>(), p.at(1).get<double>(), p.at(2).get<double>());
    for (const auto& q : j.at("joints"))
        s.joints.push_back({q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(), q.at(3).get<double>()});
    s.descent = j.at("descent").get<std::vector<double>>();
    const auto& p = j.at("profile");
    s.profile.length = p.at("length").get<double>();
    s.profile.v_peak = p.at("v_peak").get<double>();
    s.profile.accel = p.at("accel").get<double>();
    s.profile.t_acc = p.at("t_acc").get<double>();
    s.profile.t_cruise = p.at("t_cruise").get<double>();
    s.profile.t_dec = p.at("t_dec").get<double>();
    s.dwell = j.at("dwell").get<double>();
    if (!j.at("action").is_null()) {
        const auto& a = j.at("action");
        BrushAction act;
        act.kind = action_kind_from_string(a.at("kind").get<std::string>());
        act.target = {a.at("target").at(0).get<double>(), a.at("target").at(1).get<double>()};
        act.dip_duration = a.at("dip_duration").get<double>();
        act.dip_depth = a.at("dip_depth").get<double>();
        act.stone = a.at("stone").get<int>();
        s.action = act;
    }
    return s;
}

}  // namespace

std::string to_jsonl(const RobotProgram& program) {
    std::string out;
    for (size_t i = 0; i < program.segments.size(); ++i) {
        out += segment_json(program.segments[i], i).dump();
        out += '\n';
    }
    return out;
}

RobotProgram parse_jsonl(const std::string& text) {
    RobotProgram program;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            program.segments.push_back(segment_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw InvalidInput("program line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return program;
}

}  // namespace inkbot
