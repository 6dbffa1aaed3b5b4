#pragma once

#include "inkbot/editor/editor.hpp"
#include "inkbot/io/json.hpp"
#include "inkbot/geometry/contours.hpp"
#include "inkbot/mapping/mapping.hpp"
#include "inkbot/optimize/stroke.hpp"
#include "inkbot/simplify/simplify.hpp"
#include "inkbot/simulator/brush.hpp"
#include "inkbot/styles/styles.hpp"
#include "inkbot/trajectory/kinematics.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>

namespace inkbot {

enum class Stage { Contours, Simplify, Vectorize, Optimize, Map, Styles, Compile, Simulate };
inline constexpr std::array<Stage, 8> kStages{Stage::Contours, Stage::Simplify, Stage::Vectorize, Stage::Optimize,
                                              Stage::Map,      Stage::Styles,   Stage::Compile,   Stage::Simulate};
std::string to_string(Stage s);
Stage stage_from_string(const std::string& s);

struct ArtifactRecord {
    std::vector<std::string> files;  // relative to the project directory
    std::string input_hash;
    std::string output_hash;
    bool operator==(const ArtifactRecord&) const = default;
};

enum class Freshness { Missing, Stale, Fresh };
std::string to_string(Freshness f);

/// A project lives in a directory: project.json plus an artifacts/ folder.
struct Project {
    std::string id;
    std::filesystem::path dir;
    std::string mesh_file = "mesh.obj";
    Viewpoint view;
    ContourParams contour;
    unsigned family_mask = 7;
    std::string simplifier = "classic";
    SimplifierConfig simplifier_config;
    std::string simplifier_command;
    DocumentParams doc_params;
    /// Candidates at least this long (px) are picked when the document is
    /// built; 0 keeps only the outside contour.
    double auto_pick_min_length = 0;
    Editor editor;
    FitConfig fit;
    double gamma = 0.6;
    bool optimize_fit = true;
    StyleParams style;
    WorkspaceFrame frame;
    CalibrationModel calibration;
    ArmModel arm;
    SimulatorParams sim;
    double px_to_mm = 0;  // 0 picks the fit-to-paper default
    double canvas_px_per_mm = 10;
    std::map<Stage, ArtifactRecord> artifacts;

    std::filesystem::path path(const std::string& rel) const { return dir / rel; }
};

class StaleError : public InvalidInput {
public:
    StaleError(const std::string& msg, Stage rerun) : InvalidInput(msg), rerun(rerun) {}
    Stage rerun;
};

/// Defaults used by ingest: calibration fitted to the reference table with
/// a 25 mm tip offset.
CalibrationModel default_calibration();

/// Copies the mesh into `dir` and writes a new project file.
Project create_project(const std::filesystem::path& dir, const std::string& id, const std::filesystem::path& mesh,
                       const Viewpoint& view);

nlohmann::json project_to_json(const Project& p);
Project project_from_json(const nlohmann::json& j, const std::filesystem::path& dir);

void save_project(const Project& p);
Project load_project(const std::filesystem::path& dir);

}  // namespace inkbot
