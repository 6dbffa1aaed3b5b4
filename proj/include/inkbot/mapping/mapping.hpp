#pragma once

#include "inkbot/mapping/calibration.hpp"
#include "inkbot/optimize/stroke.hpp"

#include <vector>

namespace inkbot {

struct InkStones {
    Vec2 light{130, 140};
    Vec2 thick{200, 140};
    double radius = 20;
    bool operator==(const InkStones&) const = default;
};

/// Robot-frame workspace. z values are tool heights in mm.
struct WorkspaceFrame {
    Vec2 center{200, 0};
    Vec2 paper_min{140, -100};
    Vec2 paper_max{260, 100};
    double z_paper = -30;
    /// Tool height for travel moves.
    double safe_height = 0;
    InkStones stones;

    void validate(double h_tip) const;
    bool contains(const Vec2& p, double eps = 1e-9) const;
    bool operator==(const WorkspaceFrame&) const = default;
};

class MappingError : public InvalidInput {
public:
    MappingError(const std::string& msg, int stroke_id) : InvalidInput(msg), stroke_id(stroke_id) {}
    int stroke_id;
};

struct MappedStroke {
    int id = 0;
    std::vector<Vec2> points;         // robot frame, mm
    std::vector<double> thickness;    // mm
    std::vector<double> descent;      // h - h_tip, mm
    std::vector<double> z;            // tool height, mm
    std::vector<char> clamped;
    StyleHint style = StyleHint::Plain;

    bool operator==(const MappedStroke&) const = default;
};

struct MappedDocument {
    double px_to_mm = 1;
    Vec2 centroid_mm = Vec2::Zero();
    std::vector<MappedStroke> strokes;

    bool operator==(const MappedDocument&) const = default;
};

/// Scale that fits the strokes' bounding box into the paper with a 10%
/// margin, after the factor w and axis swap, with the centroid placed on
/// the frame center.
double default_px_to_mm(const std::vector<OptimizedStroke>& strokes, const WorkspaceFrame& frame,
                        const CalibrationModel& model);

/// Tool height for a lowering h (absolute, including the tip).
inline double tool_z(const WorkspaceFrame& frame, const CalibrationModel& model, double h) {
    return frame.z_paper + model.h_tip - (h - model.h_tip);
}

/// x' = w (y - yc) + xo, y' = w (x - xc) + yo in mm with the document-wide
/// centroid. px_to_mm <= 0 picks default_px_to_mm. Throws MappingError for
/// points off the paper.
MappedDocument map_strokes(const std::vector<OptimizedStroke>& strokes, double px_to_mm, const WorkspaceFrame& frame,
                           const CalibrationModel& model);

/// Single-point form of the mapping.
Vec2 map_point(const Vec2& sim_mm, const Vec2& centroid_mm, const WorkspaceFrame& frame, double w);

}  // namespace inkbot
