#pragma once

#include "inkbot/mapping/mapping.hpp"
#include "inkbot/styles/styles.hpp"
#include "inkbot/trajectory/kinematics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inkbot {

enum class PenState { Travel, Draw };
std::string to_string(PenState p);
PenState pen_state_from_string(const std::string& s);

enum class SegmentRole { Action, Travel, Descend, Draw, Lift };
std::string to_string(SegmentRole r);
SegmentRole segment_role_from_string(const std::string& s);

struct Segment {
    SegmentRole role = SegmentRole::Travel;
    PenState pen = PenState::Travel;
    std::vector<Vec3> waypoints;       // mm, robot frame
    std::vector<JointPose> joints;     // one per waypoint
    std::vector<double> descent;       // draw segments: h - h_tip per waypoint
    TrapezoidProfile profile;          // along the waypoint path
    double dwell = 0;                  // s, held at the lowest waypoint (dips)
    std::optional<BrushAction> action;
    int stroke_id = -1;
    StyleHint style = StyleHint::Plain;

    double path_length() const;
    bool operator==(const Segment&) const = default;
};

struct RobotProgram {
    std::vector<Segment> segments;
    bool operator==(const RobotProgram&) const = default;
};

struct StrokePlan {
    const MappedStroke* stroke;
    std::vector<BrushAction> prep;
};

class CompileError : public InvalidInput {
public:
    CompileError(const std::string& msg, std::vector<std::string> offending)
        : InvalidInput(msg), offending(std::move(offending)) {}
    std::vector<std::string> offending;
};

/// Brush preparation for a stroke's style.
std::vector<BrushAction> style_prep(StyleHint style, const WorkspaceFrame& frame, const StyleParams& params);

/// Per stroke: prep actions, travel at safe height, descend, draw through the
/// mapped waypoints, lift. Starts above the frame center at safe height.
RobotProgram compile_program(const std::vector<StrokePlan>& plans, const ArmModel& arm, const WorkspaceFrame& frame,
                             const CalibrationModel& model);

/// Convenience: prep from each stroke's style with shared params.
RobotProgram compile_program(const MappedDocument& doc, const StyleParams& params, const ArmModel& arm,
                             const WorkspaceFrame& frame, const CalibrationModel& model);

/// One JSON object per line, one line per segment.
std::string to_jsonl(const RobotProgram& program);
RobotProgram parse_jsonl(const std::string& text);

double program_duration(const RobotProgram& program);

}  // namespace inkbot
