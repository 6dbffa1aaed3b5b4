#include "inkbot/pipeline/project.hpp"

#include "inkbot/io/json.hpp"
#include "inkbot/pipeline/hash.hpp"

namespace inkbot {

std::string to_string(Stage s) {
    switch (s) {
        case Stage::Contours: return "contours";
        case Stage::Simplify: return "simplify";
        case Stage::Vectorize: return "vectorize";
        case Stage::Optimize: return "optimize";
        case Stage::Map: return "map";
        case Stage::Styles: return "styles";
        case Stage::Compile: return "compile";
        case Stage::Simulate: return "simulate";
    }
    return "contours";
}

Stage stage_from_string(const std::string& s) {
    for (Stage st : kStages)
        if (to_string(st) == s) return st;
    throw InvalidInput("unknown stage: " + s);
}

std::string to_string(Freshness f) {
    switch (f) {
        case Freshness::Missing: return "missing";
        case Freshness::Stale: return "stale";
        case Freshness::Fresh: return "fresh";
    }
    return "missing";
}

CalibrationModel default_calibration() { return fit_calibration(reference_calibration_table(), 25.0); }

Project create_project(const std::filesystem::path& dir, const std::string& id, const std::filesystem::path& mesh,
                       const Viewpoint& view) {
    view.validate();
    const TriangleMesh m = load_obj(mesh);
    validate(m);
    std::filesystem::create_directories(dir / "artifacts");
    Project p;
    p.id = id;
    p.dir = dir;
    p.view = view;
    p.calibration = default_calibration();
    write_atomic(p.path(p.mesh_file), read_file(mesh));
    save_project(p);
    return p;
}

json project_to_json(const Project& p) {
    json artifacts = json::object();
    for (const auto& [stage, rec] : p.artifacts)
        artifacts[to_string(stage)] = {{"files", rec.files}, {"inputHash", rec.input_hash}, {"outputHash", rec.output_hash}};
    json log = json::array();
    for (const auto& op : p.editor.log()) log.push_back(op);
    return {{"format", 1},
            {"id", p.id},
            {"mesh", p.mesh_file},
            {"view", p.view},
            {"contour", p.contour},
            {"familyMask", p.family_mask},
            {"simplifier", {{"kind", p.simplifier}, {"config", p.simplifier_config}, {"command", p.simplifier_command}}},
            {"docParams", p.doc_params},
            {"autoPickMinLength", p.auto_pick_min_length},
            {"editor", {{"initial", p.editor.initial()}, {"log", log}, {"revision", p.editor.revision()}}},
            {"fit", p.fit},
            {"gamma", p.gamma},
            {"optimizeFit", p.optimize_fit},
            {"style", p.style},
            {"frame", p.frame},
            {"calibration", p.calibration},
            {"arm", p.arm},
            {"sim", p.sim},
            {"pxToMm", p.px_to_mm},
            {"canvasPxPerMm", p.canvas_px_per_mm},
            {"artifacts", artifacts}};
}

Project project_from_json(const json& j, const std::filesystem::path& dir) {
    Project p;
    p.dir = dir;
    p.id = j.at("id").get<std::string>();
    read_opt(j, "mesh", p.mesh_file);
    read_opt(j, "view", p.view);
    read_opt(j, "contour", p.contour);
    read_opt(j, "familyMask", p.family_mask);
    if (j.contains("simplifier")) {
        const auto& s = j.at("simplifier");
        read_opt(s, "kind", p.simplifier);
        read_opt(s, "config", p.simplifier_config);
        read_opt(s, "command", p.simplifier_command);
    }
    read_opt(j, "docParams", p.doc_params);
    read_opt(j, "autoPickMinLength", p.auto_pick_min_length);
    if (j.contains("editor")) {
        const auto& e = j.at("editor");
        StrokeDocument initial = e.at("initial").get<StrokeDocument>();
        std::vector<EditOp> log = e.at("log").get<std::vector<EditOp>>();
        p.editor = Editor(std::move(initial), std::move(log));
        p.editor.set_revision(e.at("revision").get<long>());
    }
    read_opt(j, "fit", p.fit);
    read_opt(j, "gamma", p.gamma);
    read_opt(j, "optimizeFit", p.optimize_fit);
    read_opt(j, "style", p.style);
    read_opt(j, "frame", p.frame);
    read_opt(j, "calibration", p.calibration);
    read_opt(j, "arm", p.arm);
    read_opt(j, "sim", p.sim);
    read_opt(j, "pxToMm", p.px_to_mm);
    read_opt(j, "canvasPxPerMm", p.canvas_px_per_mm);
    if (j.contains("artifacts"))
        for (const auto& [name, rec] : j.at("artifacts").items()) {
            ArtifactRecord r;
            r.files = rec.at("files").get<std::vector<std::string>>();
            r.input_hash = rec.at("inputHash").get<std::string>();
            r.output_hash = rec.at("outputHash").get<std::string>();
            p.artifacts[stage_from_string(name)] = r;
        }
    return p;
}

void save_project(const Project& p) { write_atomic(p.path("project.json"), project_to_json(p).dump(1) + "\n"); }

Project load_project(const std::filesystem::path& dir) {
    const std::string text = read_file(dir / "project.json");
    try {
        return project_from_json(json::parse(text), dir);
    } catch (const json::exception& e) {
        throw InvalidInput("project file " + (dir / "project.json").string() + ": " + e.what());
    }
}

}  // namespace inkbot
