#pragma once

#include "inkbot/editor/document.hpp"
#include "inkbot/mapping/mapping.hpp"

#include <string>
#include <vector>

namespace inkbot {

enum class ActionKind { Translate, Dip, Scrape };
std::string to_string(ActionKind k);
ActionKind action_kind_from_string(const std::string& s);

struct BrushAction {
    ActionKind kind = ActionKind::Translate;
    Vec2 target = Vec2::Zero();  // mm, robot frame
    double dip_duration = 0;     // s
    double dip_depth = 0;        // mm
    /// Ink stone the action happens at: 0 light, 1 thick.
    int stone = 0;

    bool operator==(const BrushAction&) const = default;
};

struct StyleParams {
    double lambda = 1.0 / 3.0;  // dipped ratio
    double t_dip = 2.5;         // s
    double brush_length = 30;   // mm
    double c1 = 1.0;
    double c2 = 1.0;
    double c3 = 1.0;
    StyleHint style = StyleHint::Plain;

    void validate() const;
    bool operator==(const StyleParams&) const = default;
};

/// Four light-stone dips each followed by a diagonal scrape, then the thick
/// stone dip: 18 actions.
std::vector<BrushAction> noutan_actions(const WorkspaceFrame& frame, const StyleParams& params);

/// Single dip at the thick stone.
std::vector<BrushAction> kasure_actions(const WorkspaceFrame& frame, const StyleParams& params);

/// Scrape offset for n = 1..4: ((-1)^n, (-1)^floor(n/2)) * r sqrt(2)/2.
Vec2 scrape_offset(int n, double r);

/// lambda (1 - exp(-c1 T)).
double noutan_degree(const StyleParams& params);

struct KasureDegree {
    double value;
    bool infinite;  // no ink taken up (T_dip = 0)
};

/// c2 * sum (t_i + t_i+1) |C_i - C_i+1| / (2 lambda (1 - exp(-c3 T))), points
/// and thicknesses in mm.
KasureDegree kasure_degree(const std::vector<Vec2>& points, const std::vector<double>& thickness,
                           const StyleParams& params);

}  // namespace inkbot
