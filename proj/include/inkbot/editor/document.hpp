#pragma once

#include "inkbot/geometry/camera.hpp"
#include "inkbot/vectorize/vectorize.hpp"

#include <optional>
#include <string>
#include <vector>

namespace inkbot {

enum class StrokeSource { Picked, Inserted, Merged };
enum class StyleHint { Noutan, Kasure, Plain };

const char* to_string(StrokeSource s);
const char* to_string(StyleHint s);
StrokeSource stroke_source_from_string(const std::string& s);
StyleHint style_hint_from_string(const std::string& s);

struct Candidate {
    RasterPolyline poly;
    ContourFamily family = ContourFamily::OC;
    /// Piece of the outer silhouette (auto-picked on document creation).
    bool outside = false;

    bool operator==(const Candidate&) const = default;
};

struct EditableStroke {
    int id = 0;
    std::vector<Vec2> points;
    StrokeSource source = StrokeSource::Picked;
    StyleHint style = StyleHint::Plain;
    /// Candidate index this stroke was picked from, while it still matches.
    std::optional<int> candidate;
    /// Picked stroke that no longer matches any candidate after a resplit.
    bool stale = false;

    bool operator==(const EditableStroke&) const = default;
};

struct DocumentParams {
    double mu = 160.0;
    double t_min = 4.0;   // px
    double t_max = 25.0;  // px
    double smoothing_sigma = 3.0;

    void validate() const;
    bool operator==(const DocumentParams&) const = default;
};

struct StrokeDocument {
    /// Unsplit traces; candidates are these cut at corners with params.mu.
    std::vector<Candidate> traces;
    std::vector<Candidate> candidates;
    std::vector<EditableStroke> selected;
    DocumentParams params;
    Viewpoint view;
    std::string model_ref;
    int next_id = 1;

    const EditableStroke* find(int id) const;
    bool operator==(const StrokeDocument&) const = default;
};

/// Majority family of the tags found within one pixel of each point; OC when
/// the image carries no tags.
ContourFamily classify_trace(const RasterPolyline& poly, const ContourImage& tagged);

/// Splits traces at corners; the OC trace with the largest bounding box is
/// the outside contour and its pieces are picked immediately.
StrokeDocument create_document(std::vector<Candidate> traces, const DocumentParams& params, const Viewpoint& view,
                               const std::string& model_ref);

/// Recomputes candidates from traces with params.mu.
std::vector<Candidate> split_traces(const std::vector<Candidate>& traces, const DocumentParams& params);

}  // namespace inkbot
