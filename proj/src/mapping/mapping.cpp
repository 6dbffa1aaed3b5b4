#include "inkbot/mapping/mapping.hpp"

#include <algorithm>
#include <limits>

namespace inkbot {

namespace {

double rect_distance(const Vec2& p, const Vec2& lo, const Vec2& hi) {
    const double dx = std::max({lo.x() - p.x(), 0.0, p.x() - hi.x()});
    const double dy = std::max({lo.y() - p.y(), 0.0, p.y() - hi.y()});
    return std::hypot(dx, dy);
}

}  // namespace

void WorkspaceFrame::validate(double h_tip) const {
    if (!(paper_min.x() < paper_max.x() && paper_min.y() < paper_max.y()))
        throw InvalidInput("workspace: paper rectangle is empty");
    if (!contains(center)) throw InvalidInput("workspace: center outside the paper");
    if (!(safe_height > z_paper + h_tip)) throw InvalidInput("workspace: safe height must clear the paper with the brush tip");
    if (stones.radius < 0) throw InvalidInput("workspace: ink stone radius negative");
    for (const Vec2& s : {stones.light, stones.thick})
        if (rect_distance(s, paper_min, paper_max) <= stones.radius)
            throw InvalidInput("workspace: ink stone overlaps the paper");
}

bool WorkspaceFrame::contains(const Vec2& p, double eps) const {
    return p.x() >= paper_min.x() - eps && p.x() <= paper_max.x() + eps && p.y() >= paper_min.y() - eps &&
           p.y() <= paper_max.y() + eps;
}

double default_px_to_mm(const std::vector<OptimizedStroke>& strokes, const WorkspaceFrame& frame,
                        const CalibrationModel& model) {
    Vec2 sum = Vec2::Zero();
    size_t count = 0;
    for (const auto& s : strokes)
        for (const Vec2& p : s.samples) {
            sum += p;
            ++count;
        }
    if (count == 0) return 1.0;
    const Vec2 c = sum / static_cast<double>(count);
    Vec2 lo = Vec2::Zero(), hi = Vec2::Zero();  // extents around the centroid
    for (const auto& s : strokes)
        for (const Vec2& p : s.samples) {
            lo = lo.cwiseMin(p - c);
            hi = hi.cwiseMax(p - c);
        }
    // The drawing is anchored at the centroid, so each side of the bounding
    // box must fit between the frame center and the matching paper edge.
    // Sim x lands on robot y and vice versa.
    const double room[4] = {frame.center.y() - frame.paper_min.y(), frame.paper_max.y() - frame.center.y(),
                            frame.center.x() - frame.paper_min.x(), frame.paper_max.x() - frame.center.x()};
    const double need[4] = {-lo.x(), hi.x(), -lo.y(), hi.y()};
    double scale = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 4; ++i)
        if (need[i] > 1e-9) scale = std::min(scale, 0.9 * room[i] / (model.w * need[i]));
    return std::isfinite(scale) ? scale : 1.0;
}

Vec2 map_point(const Vec2& sim_mm, const Vec2& centroid_mm, const WorkspaceFrame& frame, double w) {
    return {w * (sim_mm.y() - centroid_mm.y()) + frame.center.x(), w * (sim_mm.x() - centroid_mm.x()) + frame.center.y()};
}

MappedDocument map_strokes(const std::vector<OptimizedStroke>& strokes, double px_to_mm, const WorkspaceFrame& frame,
                           const CalibrationModel& model) {
    model.validate();
    frame.validate(model.h_tip);
    MappedDocument doc;
    doc.px_to_mm = px_to_mm > 0 ? px_to_mm : default_px_to_mm(strokes, frame, model);

    size_t count = 0;
    Vec2 sum = Vec2::Zero();
    for (const auto& s : strokes)
        for (const Vec2& p : s.samples) {
            sum += p;
            ++count;
        }
    if (count > 0) doc.centroid_mm = doc.px_to_mm * sum / static_cast<double>(count);

    for (const auto& s : strokes) {
        if (s.thickness.size() != s.samples.size())
            throw MappingError("stroke " + std::to_string(s.id) + ": thickness count differs from sample count", s.id);
        MappedStroke m;
        m.id = s.id;
        m.style = s.style;
        for (size_t i = 0; i < s.samples.size(); ++i) {
            const Vec2 q = map_point(doc.px_to_mm * s.samples[i], doc.centroid_mm, frame, model.w);
            if (!frame.contains(q))
                throw MappingError("stroke " + std::to_string(s.id) + " leaves the paper at (" + std::to_string(q.x()) +
                                       ", " + std::to_string(q.y()) + ")",
                                   s.id);
            const double t = doc.px_to_mm * s.thickness[i];
            const DescentResult h = thickness_to_descent(model, t);
            m.points.push_back(q);
            m.thickness.push_back(t);
            m.descent.push_back(h.h - model.h_tip);
            m.z.push_back(tool_z(frame, model, h.h));
            m.clamped.push_back(h.clamped ? 1 : 0);
        }
        doc.strokes.push_back(std::move(m));
    }
    return doc;
}

}  // namespace inkbot
