#include "inkbot/styles/styles.hpp"

#include <cmath>
#include <limits>

namespace inkbot {

std::string to_string(ActionKind k) {
    switch (k) {
        case ActionKind::Translate: return "translate";
        case ActionKind::Dip: return "dip";
        case ActionKind::Scrape: return "scrape";
    }
    return "translate";
}

ActionKind action_kind_from_string(const std::string& s) {
    if (s == "translate") return ActionKind::Translate;
    if (s == "dip") return ActionKind::Dip;
    if (s == "scrape") return ActionKind::Scrape;
    throw InvalidInput("unknown action kind: " + s);
}

void StyleParams::validate() const {
    if (!(lambda > 0 && lambda <= 1)) throw InvalidInput("style: lambda must be in (0, 1]");
    if (!(t_dip >= 0)) throw InvalidInput("style: T_dip must be >= 0");
    if (!(brush_length > 0)) throw InvalidInput("style: brush length must be positive");
    if (!(c1 > 0 && c2 > 0 && c3 > 0)) throw InvalidInput("style: c1, c2, c3 must be positive");
}

Vec2 scrape_offset(int n, double r) {
    const double k = r * std::sqrt(0.5);
    const double sx = (n % 2 == 0) ? 1.0 : -1.0;
    const double sy = ((n / 2) % 2 == 0) ? 1.0 : -1.0;
    return {sx * k, sy * k};
}

std::vector<BrushAction> noutan_actions(const WorkspaceFrame& frame, const StyleParams& params) {
    params.validate();
    const double depth = params.lambda * params.brush_length;
    std::vector<BrushAction> out;
    const Vec2 light = frame.stones.light;
    for (int n = 1; n <= 4; ++n) {
        out.push_back({ActionKind::Translate, light, 0, 0, 0});
        out.push_back({ActionKind::Dip, light, params.t_dip, depth, 0});
        const Vec2 corner = light + scrape_offset(n, frame.stones.radius);
        out.push_back({ActionKind::Translate, corner, 0, 0, 0});
        out.push_back({ActionKind::Scrape, corner, 0, 0, 0});
    }
    out.push_back({ActionKind::Translate, frame.stones.thick, 0, 0, 1});
    out.push_back({ActionKind::Dip, frame.stones.thick, params.t_dip, depth, 1});
    return out;
}

std::vector<BrushAction> kasure_actions(const WorkspaceFrame& frame, const StyleParams& params) {
    params.validate();
    return {{ActionKind::Translate, frame.stones.thick, 0, 0, 1},
            {ActionKind::Dip, frame.stones.thick, params.t_dip, params.lambda * params.brush_length, 1}};
}

double noutan_degree(const StyleParams& params) {
    params.validate();
    return params.lambda * (1.0 - std::exp(-params.c1 * params.t_dip));
}

KasureDegree kasure_degree(const std::vector<Vec2>& points, const std::vector<double>& thickness,
                           const StyleParams& params) {
    params.validate();
    if (points.size() != thickness.size()) throw InvalidInput("kasure: point and thickness counts differ");
    double area2 = 0;
    for (size_t i = 0; i + 1 < points.size(); ++i)
        area2 += (thickness[i] + thickness[i + 1]) * (points[i] - points[i + 1]).norm();
    const double ink = params.lambda * (1.0 - std::exp(-params.c3 * params.t_dip));
    if (area2 == 0) return {0.0, false};
    if (ink <= 0) return {std::numeric_limits<double>::infinity(), true};
    return {params.c2 * area2 / (2.0 * ink), false};
}

}  // namespace inkbot
