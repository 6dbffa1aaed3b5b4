#pragma once

#include "inkbot/editor/editor.hpp"
#include "inkbot/geometry/contours.hpp"
#include "inkbot/mapping/mapping.hpp"
#include "inkbot/optimize/stroke.hpp"
#include "inkbot/simplify/simplify.hpp"
#include "inkbot/simulator/brush.hpp"
#include "inkbot/simulator/metrics.hpp"
#include "inkbot/styles/styles.hpp"
#include "inkbot/trajectory/kinematics.hpp"

#include <json.hpp>

namespace nlohmann {

template <>
struct adl_serializer<inkbot::Vec2> {
    static void to_json(json& j, const inkbot::Vec2& v) { j = json::array({v.x(), v.y()}); }
    static void from_json(const json& j, inkbot::Vec2& v) { v = {j.at(0).get<double>(), j.at(1).get<double>()}; }
};

template <>
struct adl_serializer<inkbot::Vec3> {
    static void to_json(json& j, const inkbot::Vec3& v) { j = json::array({v.x(), v.y(), v.z()}); }
    static void from_json(const json& j, inkbot::Vec3& v) {
        v = {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
    }
};

}  // namespace nlohmann

namespace inkbot {

using nlohmann::json;

#define INKBOT_JSON(T)                  \
    void to_json(json& j, const T& v);  \
    void from_json(const json& j, T& v);

INKBOT_JSON(Viewpoint)
INKBOT_JSON(SimplifierConfig)
INKBOT_JSON(ContourParams)
INKBOT_JSON(RasterPolyline)
INKBOT_JSON(Candidate)
INKBOT_JSON(EditableStroke)
INKBOT_JSON(DocumentParams)
INKBOT_JSON(StrokeDocument)
INKBOT_JSON(EditOp)
INKBOT_JSON(FitConfig)
INKBOT_JSON(BSplineCurve)
INKBOT_JSON(OptimizedStroke)
INKBOT_JSON(CalibrationModel)
INKBOT_JSON(InkStones)
INKBOT_JSON(WorkspaceFrame)
INKBOT_JSON(MappedStroke)
INKBOT_JSON(MappedDocument)
INKBOT_JSON(StyleParams)
INKBOT_JSON(BrushAction)
INKBOT_JSON(JointLimits)
INKBOT_JSON(ArmModel)
INKBOT_JSON(SimulatorParams)
INKBOT_JSON(TurningPointMetric)

#undef INKBOT_JSON

/// Reads `key` into `out` when present; missing keys keep defaults.
template <typename T>
void read_opt(const json& j, const char* key, T& out) {
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

}  // namespace inkbot
