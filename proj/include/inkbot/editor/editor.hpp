#pragma once

#include "inkbot/editor/document.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace inkbot {

/// Rejected edit; the document is left untouched.
class EditError : public InvalidInput {
public:
    using InvalidInput::InvalidInput;
};

/// Merge rejected because the closest endpoints are too far apart.
class MergeDistanceError : public EditError {
public:
    MergeDistanceError(double distance, double radius);
    double distance;
    double radius;
};

struct EditOp {
    enum class Kind { Pick, Delete, Merge, Insert, Resplit, SetParams, SetStyle };
    Kind kind = Kind::Pick;
    int candidate = -1;          // Pick
    int a = 0, b = 0;            // Delete (a), Merge (a, b), SetStyle (a)
    std::vector<Vec2> points;    // Insert
    double mu = 0;               // Resplit
    double t_min = 0, t_max = 0; // SetParams
    StyleHint style = StyleHint::Plain;

    static EditOp pick(int candidate);
    static EditOp remove(int id);
    static EditOp merge(int a, int b);
    static EditOp insert(std::vector<Vec2> points);
    static EditOp resplit(double mu);
    static EditOp set_params(double t_min, double t_max);
    static EditOp set_style(int id, StyleHint style);

    bool operator==(const EditOp&) const = default;
};

const char* to_string(EditOp::Kind k);
EditOp::Kind edit_kind_from_string(const std::string& s);

inline constexpr double kMergeRadius = 15.0;

/// Pure document operations. Each returns the new document or throws
/// EditError; `warning` receives a note for no-op calls such as a double pick.
StrokeDocument apply_edit(const StrokeDocument& doc, const EditOp& op, std::string* warning = nullptr);

/// Document plus the log of accepted operations. The current document is
/// always the replay of the log over the initial document.
class Editor {
public:
    Editor() = default;
    explicit Editor(StrokeDocument initial);
    Editor(StrokeDocument initial, std::vector<EditOp> log);

    const StrokeDocument& document() const { return current_; }
    const StrokeDocument& initial() const { return initial_; }
    const std::vector<EditOp>& log() const { return log_; }
    /// Bumped by every accepted mutation, including undo.
    long revision() const { return revision_; }
    void set_revision(long r) { revision_ = r; }

    /// Applies and logs the op; no-op picks are not logged. Returns warning.
    std::string apply(const EditOp& op);
    /// Drops the last op. Returns false when the log is empty.
    bool undo();

    static StrokeDocument replay(const StrokeDocument& initial, const std::vector<EditOp>& log);

private:
    StrokeDocument initial_;
    StrokeDocument current_;
    std::vector<EditOp> log_;
    long revision_ = 0;
};

}  // namespace inkbot
