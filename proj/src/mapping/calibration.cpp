#include "inkbot/mapping/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

namespace inkbot {

void CalibrationTable::validate() const {
    if (rows.size() < 2) throw InvalidInput("calibration: need at least 2 rows");
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!(rows[i].thickness > 0)) throw InvalidInput("calibration: thickness must be positive (row " + std::to_string(i + 1) + ")");
        if (!std::isfinite(rows[i].descent)) throw InvalidInput("calibration: descent not finite");
    }
    std::vector<double> d;
    for (const auto& r : rows) d.push_back(r.descent);
    std::sort(d.begin(), d.end());
    if (std::adjacent_find(d.begin(), d.end()) != d.end()) throw InvalidInput("calibration: descents must be distinct");
}

CalibrationTable parse_calibration_csv(const std::string& text) {
    CalibrationTable table;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw InvalidInput("calibration csv line " + std::to_string(lineno) + ": expected two columns");
        const std::string a = line.substr(0, comma), b = line.substr(comma + 1);
        try {
            size_t pa = 0, pb = 0;
            const double d = std::stod(a, &pa), t = std::stod(b, &pb);
            table.rows.push_back({d, t});
        } catch (const std::logic_error&) {
            if (table.rows.empty() && lineno == 1) continue;  // header
            throw InvalidInput("calibration csv line " + std::to_string(lineno) + ": not numeric");
        }
    }
    table.validate();
    return table;
}

CalibrationTable load_calibration_csv(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw InvalidInput("cannot open " + path.string());
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_calibration_csv(ss.str());
}

CalibrationTable reference_calibration_table() {
    return {{{2, 3}, {4, 4}, {6, 5}, {8, 6.5}, {10, 10.5}, {12, 12}, {14, 13}, {16, 14}, {18, 14.5}}};
}

std::string to_csv(const CalibrationTable& table) {
    std::ostringstream out;
    out << "descent_mm,thickness_mm\n" << std::setprecision(17);
    for (const auto& r : table.rows) out << r.descent << ',' << r.thickness << '\n';
    return out.str();
}

void CalibrationModel::validate() const {
    if (!(w > 0)) throw InvalidInput("calibration model: w must be positive");
    if (!(r2 >= 0 && r2 <= 1)) throw InvalidInput("calibration model: r2 outside [0, 1]");
}

CalibrationModel fit_calibration(const CalibrationTable& table, double h_tip) {
    table.validate();
    std::set<double> distinct;
    for (const auto& r : table.rows) distinct.insert(r.thickness);
    if (distinct.size() < 2) throw InvalidInput("calibration: fewer than 2 distinct thicknesses (rank deficient)");

    // Centered sums are order independent up to rounding and well conditioned.
    const double n = static_cast<double>(table.rows.size());
    double mt = 0, md = 0;
    for (const auto& r : table.rows) {
        mt += r.thickness;
        md += r.descent;
    }
    mt /= n;
    md /= n;
    double stt = 0, std_ = 0, sdd = 0;
    for (const auto& r : table.rows) {
        stt += (r.thickness - mt) * (r.thickness - mt);
        std_ += (r.thickness - mt) * (r.descent - md);
        sdd += (r.descent - md) * (r.descent - md);
    }
    CalibrationModel m;
    m.w = std_ / stt;
    m.b = md - m.w * mt;
    m.h_tip = h_tip;
    double ss_res = 0;
    for (const auto& r : table.rows) {
        const double e = r.descent - (m.w * r.thickness + m.b);
        ss_res += e * e;
    }
    m.r2 = sdd > 0 ? std::clamp(1.0 - ss_res / sdd, 0.0, 1.0) : 1.0;
    if (!(m.w > 0)) throw InvalidInput("calibration: fitted slope is not positive");
    return m;
}

DescentResult thickness_to_descent(const CalibrationModel& model, double thickness_mm) {
    if (!(thickness_mm > 0) || !std::isfinite(thickness_mm)) throw InvalidInput("thickness must be positive");
    const double h = model.w * thickness_mm + model.b + model.h_tip;
    if (h < model.h_tip) return {model.h_tip, true};
    return {h, false};
}

double footprint_width(double h, const CalibrationModel& model) {
    if (h < model.h_tip) return 0.0;
    return std::max(0.0, (h - model.h_tip - model.b) / model.w);
}

}  // namespace inkbot
