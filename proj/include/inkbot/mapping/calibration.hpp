#pragma once

#include "inkbot/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace inkbot {

struct CalibrationRow {
    double descent;    // mm past tip contact
    double thickness;  // mm
    bool operator==(const CalibrationRow&) const = default;
};

struct CalibrationTable {
    std::vector<CalibrationRow> rows;
    void validate() const;
};

/// CSV with header `descent_mm,thickness_mm`.
CalibrationTable parse_calibration_csv(const std::string& text);
CalibrationTable load_calibration_csv(const std::filesystem::path& path);

/// The nine measured (descent, thickness) pairs of the reference brush.
CalibrationTable reference_calibration_table();
std::string to_csv(const CalibrationTable& table);

/// Descent past tip contact d = w t + b; absolute lowering h = d + h_tip.
struct CalibrationModel {
    double w = 1.0;
    double b = 0.0;
    double h_tip = 0.0;
    double r2 = 1.0;

    void validate() const;
    bool operator==(const CalibrationModel&) const = default;
};

/// Least squares of descent on thickness. Throws when fewer than two
/// distinct thicknesses are present.
CalibrationModel fit_calibration(const CalibrationTable& table, double h_tip);

struct DescentResult {
    double h;       // w t + b + h_tip, clamped to >= h_tip
    bool clamped;   // stroke thinner than the tip can draw
};
DescentResult thickness_to_descent(const CalibrationModel& model, double thickness_mm);

/// Footprint width for an absolute lowering h: the inverse calibration line
/// (h - h_tip - b) / w, clamped at zero, and zero while the tip is above the
/// paper (h < h_tip).
double footprint_width(double h, const CalibrationModel& model);

}  // namespace inkbot
