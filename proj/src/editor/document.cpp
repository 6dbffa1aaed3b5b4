#include "inkbot/editor/document.hpp"

#include <algorithm>
#include <array>
#include <limits>

namespace inkbot {

const char* to_string(StrokeSource s) {
    switch (s) {
        case StrokeSource::Picked: return "picked";
        case StrokeSource::Inserted: return "inserted";
        case StrokeSource::Merged: return "merged";
    }
    return "picked";
}

const char* to_string(StyleHint s) {
    switch (s) {
        case StyleHint::Noutan: return "noutan";
        case StyleHint::Kasure: return "kasure";
        case StyleHint::Plain: return "plain";
    }
    return "plain";
}

StrokeSource stroke_source_from_string(const std::string& s) {
    if (s == "picked") return StrokeSource::Picked;
    if (s == "inserted") return StrokeSource::Inserted;
    if (s == "merged") return StrokeSource::Merged;
    throw InvalidInput("unknown stroke source '" + s + "'");
}

StyleHint style_hint_from_string(const std::string& s) {
    if (s == "noutan") return StyleHint::Noutan;
    if (s == "kasure") return StyleHint::Kasure;
    if (s == "plain") return StyleHint::Plain;
    throw InvalidInput("unknown style '" + s + "'");
}

void DocumentParams::validate() const {
    if (!(mu > 0)) throw InvalidInput("document params: mu must be > 0");
    if (!(t_min > 0) || t_min > t_max) throw InvalidInput("document params: need 0 < tMin <= tMax");
}

const EditableStroke* StrokeDocument::find(int id) const {
    for (const auto& s : selected)
        if (s.id == id) return &s;
    return nullptr;
}

ContourFamily classify_trace(const RasterPolyline& poly, const ContourImage& tagged) {
    std::array<int, 3> votes{};
    constexpr std::array<ContourFamily, 3> order{ContourFamily::OC, ContourFamily::SC, ContourFamily::AR};
    for (const Vec2& p : poly.points) {
        std::uint8_t bits = 0;
        const int x = static_cast<int>(std::lround(p.x())), y = static_cast<int>(std::lround(p.y()));
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (tagged.inside(x + dx, y + dy) && !tagged.tags.empty()) bits |= tagged.tag(x + dx, y + dy);
        for (size_t f = 0; f < order.size(); ++f) votes[f] += (bits & static_cast<std::uint8_t>(order[f])) ? 1 : 0;
    }
    size_t best = 0;
    for (size_t f = 1; f < order.size(); ++f)
        if (votes[f] > votes[best]) best = f;
    return order[best];
}

std::vector<Candidate> split_traces(const std::vector<Candidate>& traces, const DocumentParams& params) {
    CornerParams cp;
    cp.split_ratio = params.mu;
    cp.smoothing_sigma = params.smoothing_sigma;
    std::vector<Candidate> out;
    for (const auto& t : traces)
        for (auto& piece : split_at_corners(t.poly, detect_corners(t.poly, cp)))
            out.push_back({std::move(piece), t.family, t.outside});
    return out;
}

StrokeDocument create_document(std::vector<Candidate> traces, const DocumentParams& params, const Viewpoint& view,
                               const std::string& model_ref) {
    params.validate();
    StrokeDocument doc;
    doc.params = params;
    doc.view = view;
    doc.model_ref = model_ref;

    int outside = -1;
    double best_area = -1;
    for (size_t i = 0; i < traces.size(); ++i) {
        traces[i].outside = false;
        if (traces[i].family != ContourFamily::OC || traces[i].poly.points.empty()) continue;
        Vec2 lo = traces[i].poly.points.front(), hi = lo;
        for (const Vec2& p : traces[i].poly.points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        const double area = (hi - lo).prod();
        if (area > best_area) {
            best_area = area;
            outside = static_cast<int>(i);
        }
    }
    if (outside >= 0) traces[outside].outside = true;
    doc.traces = std::move(traces);
    doc.candidates = split_traces(doc.traces, doc.params);
    for (size_t i = 0; i < doc.candidates.size(); ++i) {
        if (!doc.candidates[i].outside) continue;
        EditableStroke s;
        s.id = doc.next_id++;
        s.points = doc.candidates[i].poly.points;
        if (doc.candidates[i].poly.closed) s.points.push_back(s.points.front());
        s.source = StrokeSource::Picked;
        s.candidate = static_cast<int>(i);
        doc.selected.push_back(std::move(s));
    }
    return doc;
}

}  // namespace inkbot
