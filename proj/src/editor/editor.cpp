#include "inkbot/editor/editor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inkbot {

MergeDistanceError::MergeDistanceError(double d, double r)
    : EditError([&] {
          std::ostringstream os;
          os << "merge rejected: closest endpoints are " << d << " px apart (merge radius " << r << " px)";
          return os.str();
      }()),
      distance(d),
      radius(r) {}

EditOp EditOp::pick(int candidate) {
    EditOp op;
    op.kind = Kind::Pick;
    op.candidate = candidate;
    return op;
}

EditOp EditOp::remove(int id) {
    EditOp op;
    op.kind = Kind::Delete;
    op.a = id;
    return op;
}

EditOp EditOp::merge(int a, int b) {
    EditOp op;
    op.kind = Kind::Merge;
    op.a = a;
    op.b = b;
    return op;
}

EditOp EditOp::insert(std::vector<Vec2> points) {
    EditOp op;
    op.kind = Kind::Insert;
    op.points = std::move(points);
    return op;
}

EditOp EditOp::resplit(double mu) {
    EditOp op;
    op.kind = Kind::Resplit;
    op.mu = mu;
    return op;
}

EditOp EditOp::set_params(double t_min, double t_max) {
    EditOp op;
    op.kind = Kind::SetParams;
    op.t_min = t_min;
    op.t_max = t_max;
    return op;
}

EditOp EditOp::set_style(int id, StyleHint style) {
    EditOp op;
    op.kind = Kind::SetStyle;
    op.a = id;
    op.style = style;
    return op;
}

const char* to_string(EditOp::Kind k) {
    switch (k) {
        case EditOp::Kind::Pick: return "pick";
        case EditOp::Kind::Delete: return "delete";
        case EditOp::Kind::Merge: return "merge";
        case EditOp::Kind::Insert: return "insert";
        case EditOp::Kind::Resplit: return "resplit";
        case EditOp::Kind::SetParams: return "set_params";
        case EditOp::Kind::SetStyle: return "set_style";
    }
    return "pick";
}

EditOp::Kind edit_kind_from_string(const std::string& s) {
    for (auto k : {EditOp::Kind::Pick, EditOp::Kind::Delete, EditOp::Kind::Merge, EditOp::Kind::Insert,
                   EditOp::Kind::Resplit, EditOp::Kind::SetParams, EditOp::Kind::SetStyle})
        if (s == to_string(k)) return k;
    throw InvalidInput("unknown edit op '" + s + "'");
}

namespace {

std::vector<Vec2> candidate_points(const Candidate& c) {
    std::vector<Vec2> pts = c.poly.points;
    if (c.poly.closed && !pts.empty()) pts.push_back(pts.front());
    return pts;
}

bool same_path(const std::vector<Vec2>& a, const std::vector<Vec2>& b) {
    if (a.size() != b.size()) return false;
    return std::equal(a.begin(), a.end(), b.begin()) || std::equal(a.begin(), a.end(), b.rbegin());
}

size_t index_of(const StrokeDocument& doc, int id) {
    for (size_t i = 0; i < doc.selected.size(); ++i)
        if (doc.selected[i].id == id) return i;
    throw EditError("unknown stroke id " + std::to_string(id));
}

StrokeDocument do_pick(const StrokeDocument& doc, int idx, std::string* warning) {
    if (idx < 0 || idx >= static_cast<int>(doc.candidates.size()))
        throw EditError("candidate index " + std::to_string(idx) + " out of range");
    for (const auto& s : doc.selected)
        if (s.candidate == idx) {
            if (warning) *warning = "candidate " + std::to_string(idx) + " already picked as stroke " + std::to_string(s.id);
            return doc;
        }
    StrokeDocument out = doc;
    EditableStroke s;
    s.id = out.next_id++;
    s.points = candidate_points(doc.candidates[idx]);
    s.source = StrokeSource::Picked;
    s.candidate = idx;
    out.selected.push_back(std::move(s));
    return out;
}

StrokeDocument do_merge(const StrokeDocument& doc, int ida, int idb) {
    if (ida == idb) throw EditError("cannot merge a stroke with itself");
    const size_t ia = index_of(doc, ida), ib = index_of(doc, idb);
    const auto& A = doc.selected[ia].points;
    const auto& B = doc.selected[ib].points;

    // endpoint pairings in a fixed order: (A end, B start), (A end, B end),
    // (A start, B start), (A start, B end)
    const double d[4] = {(A.back() - B.front()).norm(), (A.back() - B.back()).norm(), (A.front() - B.front()).norm(),
                         (A.front() - B.back()).norm()};
    const int best = static_cast<int>(std::min_element(d, d + 4) - d);
    if (d[best] > kMergeRadius) throw MergeDistanceError(d[best], kMergeRadius);

    std::vector<Vec2> a = A, b = B;
    if (best == 1) std::reverse(b.begin(), b.end());
    if (best == 2) std::reverse(a.begin(), a.end());
    if (best == 3) {
        std::reverse(a.begin(), a.end());
        std::reverse(b.begin(), b.end());
    }
    StrokeDocument out = doc;
    EditableStroke m;
    m.id = out.next_id++;
    m.points = std::move(a);
    m.points.insert(m.points.end(), b.begin(), b.end());
    m.source = StrokeSource::Merged;
    m.style = doc.selected[ia].style;
    out.selected[ia] = std::move(m);
    out.selected.erase(out.selected.begin() + static_cast<long>(ib));
    return out;
}

StrokeDocument do_insert(const StrokeDocument& doc, const std::vector<Vec2>& pts) {
    if (pts.size() < 2) throw EditError("insert needs at least 2 points");
    for (const Vec2& p : pts)
        if (!(p.x() >= 0 && p.y() >= 0 && p.x() < doc.view.image_width && p.y() < doc.view.image_height))
            throw EditError("insert: point outside the image bounds");
    StrokeDocument out = doc;
    EditableStroke s;
    s.id = out.next_id++;
    s.points = pts;
    s.source = StrokeSource::Inserted;
    out.selected.push_back(std::move(s));
    return out;
}

StrokeDocument do_resplit(const StrokeDocument& doc, double mu) {
    if (!(mu > 0)) throw EditError("resplit: mu must be > 0");
    StrokeDocument out = doc;
    out.params.mu = mu;
    out.candidates = split_traces(out.traces, out.params);
    for (auto& s : out.selected) {
        if (s.source != StrokeSource::Picked) continue;
        s.candidate.reset();
        s.stale = true;
        for (size_t i = 0; i < out.candidates.size(); ++i)
            if (same_path(s.points, candidate_points(out.candidates[i]))) {
                s.candidate = static_cast<int>(i);
                s.stale = false;
                break;
            }
    }
    return out;
}

}  // namespace

StrokeDocument apply_edit(const StrokeDocument& doc, const EditOp& op, std::string* warning) {
    switch (op.kind) {
        case EditOp::Kind::Pick: return do_pick(doc, op.candidate, warning);
        case EditOp::Kind::Delete: {
            const size_t i = index_of(doc, op.a);
            StrokeDocument out = doc;
            out.selected.erase(out.selected.begin() + static_cast<long>(i));
            return out;
        }
        case EditOp::Kind::Merge: return do_merge(doc, op.a, op.b);
        case EditOp::Kind::Insert: return do_insert(doc, op.points);
        case EditOp::Kind::Resplit: return do_resplit(doc, op.mu);
        case EditOp::Kind::SetParams: {
            StrokeDocument out = doc;
            out.params.t_min = op.t_min;
            out.params.t_max = op.t_max;
            try {
                out.params.validate();
            } catch (const InvalidInput& e) {
                throw EditError(e.what());
            }
            return out;
        }
        case EditOp::Kind::SetStyle: {
            const size_t i = index_of(doc, op.a);
            StrokeDocument out = doc;
            out.selected[i].style = op.style;
            return out;
        }
    }
    throw EditError("unknown edit op");
}

Editor::Editor(StrokeDocument initial) : initial_(std::move(initial)), current_(initial_) {}

Editor::Editor(StrokeDocument initial, std::vector<EditOp> log)
    : initial_(std::move(initial)), current_(replay(initial_, log)), log_(std::move(log)) {}

std::string Editor::apply(const EditOp& op) {
    std::string warning;
    StrokeDocument next = apply_edit(current_, op, &warning);
    if (!warning.empty() && next == current_) return warning;
    current_ = std::move(next);
    log_.push_back(op);
    ++revision_;
    return warning;
}

bool Editor::undo() {
    if (log_.empty()) return false;
    log_.pop_back();
    current_ = replay(initial_, log_);
    ++revision_;
    return true;
}

StrokeDocument Editor::replay(const StrokeDocument& initial, const std::vector<EditOp>& log) {
    StrokeDocument doc = initial;
    for (const auto& op : log) doc = apply_edit(doc, op);
    return doc;
}

}  // namespace inkbot
