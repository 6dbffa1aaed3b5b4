#include "inkbot/pipeline/stages.hpp"

#include "inkbot/io/json.hpp"
#include "inkbot/pipeline/hash.hpp"

#include <algorithm>
#include <set>

namespace inkbot {

namespace {

const char* kContourPng = "artifacts/contours.png";
const char* kTagPng = "artifacts/contour_tags.png";
const char* kSimplifiedPng = "artifacts/simplified.png";
const char* kCandidatesJson = "artifacts/candidates.json";
const char* kStrokesJson = "artifacts/strokes.json";
const char* kMappedJson = "artifacts/mapped.json";
const char* kStylesJson = "artifacts/styles.json";
const char* kProgramJsonl = "artifacts/program.jsonl";
const char* kCanvasPng = "artifacts/canvas.png";

std::string output_hash(const Project& p, const std::vector<std::string>& files) {
    Hasher h;
    for (const auto& f : files) h.add(f).add(read_file(p.path(f)));
    return h.hex();
}

const std::string& upstream_output(const Project& p, Stage s) {
    const auto it = p.artifacts.find(s);
    if (it == p.artifacts.end()) throw StaleError("stage " + to_string(s) + " has not been run", s);
    return it->second.output_hash;
}

/// PNG writers go through a temp file so the stored file appears atomically.
template <typename Writer>
void store_png(const Project& p, const std::string& rel, Writer write) {
    const auto tmp = p.path(rel + ".part");
    std::filesystem::create_directories(tmp.parent_path());
    write(tmp);
    std::filesystem::rename(tmp, p.path(rel));
}

void store_text(const Project& p, const std::string& rel, const std::string& text) { write_atomic(p.path(rel), text); }

void record(Project& p, Stage s, std::vector<std::string> files) {
    ArtifactRecord r;
    r.input_hash = stage_input_hash(p, s);
    r.output_hash = output_hash(p, files);
    r.files = std::move(files);
    p.artifacts[s] = r;
}

std::vector<Stage> ancestors(Stage s) {
    std::set<Stage> seen;
    std::vector<Stage> stack = upstream(s);
    while (!stack.empty()) {
        const Stage u = stack.back();
        stack.pop_back();
        if (!seen.insert(u).second) continue;
        for (Stage v : upstream(u)) stack.push_back(v);
    }
    return {seen.begin(), seen.end()};  // enum order is pipeline order
}

ContourImage read_tagged_contours(const Project& p) {
    ContourImage img = read_png(p.path(kContourPng));
    int w = 0, h = 0;
    const auto tags = read_gray8_png(p.path(kTagPng), w, h);
    if (w != img.width || h != img.height) throw InvalidInput("contour tag image size mismatch");
    img.tags = tags;
    for (size_t i = 0; i < tags.size(); ++i)
        if (img.intensity[i] <= 0) img.tags[i] = 0;
    return img;
}

std::vector<OptimizedStroke> optimize_document(const Project& p, const StrokeDocument& doc, std::vector<int>* skipped) {
    std::vector<OptimizedStroke> out;
    for (const auto& s : doc.selected) {
        try {
            out.push_back(p.optimize_fit ? optimize_stroke(s, p.fit, doc.params, p.gamma)
                                         : unoptimized_stroke(s, p.fit, doc.params, p.gamma));
            continue;
        } catch (const InvalidInput&) {
        }
        try {
            out.push_back(unoptimized_stroke(s, p.fit, doc.params, p.gamma));
        } catch (const InvalidInput&) {
            if (skipped) skipped->push_back(s.id);
        }
    }
    return out;
}

std::vector<StrokePlan> plans_for(const MappedDocument& mapped, const Project& p) {
    std::vector<StrokePlan> plans;
    for (const auto& s : mapped.strokes) plans.push_back({&s, style_prep(s.style, p.frame, p.style)});
    return plans;
}

}  // namespace

std::vector<Stage> upstream(Stage s) {
    switch (s) {
        case Stage::Contours: return {};
        case Stage::Simplify: return {Stage::Contours};
        case Stage::Vectorize: return {Stage::Contours, Stage::Simplify};
        case Stage::Optimize: return {Stage::Vectorize};
        case Stage::Map: return {Stage::Optimize};
        case Stage::Styles: return {Stage::Map};
        case Stage::Compile: return {Stage::Map, Stage::Styles};
        case Stage::Simulate: return {Stage::Compile};
    }
    return {};
}

std::string stage_input_hash(const Project& p, Stage s) {
    Hasher h;
    h.add(to_string(s));
    for (Stage u : upstream(s)) h.add(upstream_output(p, u));
    json cfg;
    switch (s) {
        case Stage::Contours:
            h.add(read_file(p.path(p.mesh_file)));
            cfg = {p.view, p.contour, p.family_mask};
            break;
        case Stage::Simplify:
            cfg = {p.simplifier, p.simplifier_config, p.simplifier_command};
            break;
        case Stage::Vectorize:
            cfg = {p.doc_params, p.auto_pick_min_length, p.view, p.mesh_file};
            break;
        case Stage::Optimize: {
            const StrokeDocument& d = p.editor.document();
            cfg = {d.selected, d.params, p.fit, p.gamma, p.optimize_fit};
            break;
        }
        case Stage::Map:
            cfg = {p.frame, p.calibration, p.px_to_mm};
            break;
        case Stage::Styles:
            cfg = {p.style, p.frame};
            break;
        case Stage::Compile:
            cfg = {p.arm, p.frame, p.calibration};
            break;
        case Stage::Simulate:
            cfg = {p.style, p.sim, p.calibration, p.frame, p.canvas_px_per_mm};
            break;
    }
    h.add(cfg.dump());
    return h.hex();
}

Freshness freshness(const Project& p, Stage s) {
    const auto it = p.artifacts.find(s);
    if (it == p.artifacts.end()) return Freshness::Missing;
    for (Stage u : upstream(s))
        if (freshness(p, u) != Freshness::Fresh) return Freshness::Stale;
    for (const auto& f : it->second.files)
        if (!std::filesystem::exists(p.path(f))) return Freshness::Missing;
    return stage_input_hash(p, s) == it->second.input_hash ? Freshness::Fresh : Freshness::Stale;
}

void run_stage(Project& p, Stage s) {
    for (Stage u : ancestors(s)) {
        const Freshness f = freshness(p, u);
        if (f != Freshness::Fresh)
            throw StaleError("cannot run " + to_string(s) + ": upstream stage " + to_string(u) + " is " + to_string(f) +
                                 "; rerun " + to_string(u),
                             u);
    }
    std::filesystem::create_directories(p.path("artifacts"));

    switch (s) {
        case Stage::Contours: {
            const TriangleMesh mesh = load_obj(p.path(p.mesh_file));
            const ContourResult r = render_contours(mesh, p.view, p.family_mask, p.contour);
            store_png(p, kContourPng, [&](const auto& path) { write_png(r.image, path); });
            store_png(p, kTagPng, [&](const auto& path) { write_gray8_png(path, r.image.width, r.image.height, r.image.tags); });
            record(p, s, {kContourPng, kTagPng});
            break;
        }
        case Stage::Simplify: {
            const ContourImage img = read_png(p.path(kContourPng));
            const auto fn = make_simplifier(p.simplifier, p.simplifier_config, p.simplifier_command, p.path("artifacts"));
            const ContourImage out = fn(img);
            store_png(p, kSimplifiedPng, [&](const auto& path) { write_png(out, path); });
            record(p, s, {kSimplifiedPng});
            break;
        }
        case Stage::Vectorize: {
            const ContourImage skeleton = read_png(p.path(kSimplifiedPng));
            const ContourImage tagged = read_tagged_contours(p);
            std::vector<Candidate> traces;
            for (auto& poly : trace_contours(skeleton)) {
                Candidate c;
                c.family = classify_trace(poly, tagged);
                c.poly = std::move(poly);
                traces.push_back(std::move(c));
            }
            StrokeDocument doc = create_document(std::move(traces), p.doc_params, p.view, p.mesh_file);
            if (p.auto_pick_min_length > 0)
                for (int i = 0; i < static_cast<int>(doc.candidates.size()); ++i) {
                    const auto& c = doc.candidates[i];
                    if (polyline_length(c.poly.points, c.poly.closed) >= p.auto_pick_min_length)
                        doc = apply_edit(doc, EditOp::pick(i));
                }
            if (!(doc == p.editor.initial())) {
                const long rev = p.editor.revision();
                p.editor = Editor(doc);
                p.editor.set_revision(rev + 1);
            }
            store_text(p, kCandidatesJson, json({{"traces", doc.traces}, {"candidates", doc.candidates}}).dump() + "\n");
            record(p, s, {kCandidatesJson});
            break;
        }
        case Stage::Optimize: {
            std::vector<int> skipped;
            const auto strokes = optimize_document(p, p.editor.document(), &skipped);
            store_text(p, kStrokesJson, json({{"strokes", strokes}, {"skipped", skipped}}).dump() + "\n");
            record(p, s, {kStrokesJson});
            break;
        }
        case Stage::Map: {
            const MappedDocument mapped = map_strokes(load_strokes(p), p.px_to_mm, p.frame, p.calibration);
            store_text(p, kMappedJson, json(mapped).dump() + "\n");
            record(p, s, {kMappedJson});
            break;
        }
        case Stage::Styles: {
            const MappedDocument mapped = load_mapped(p);
            json out = json::array();
            for (const auto& st : mapped.strokes) {
                const auto prep = style_prep(st.style, p.frame, p.style);
                out.push_back({{"id", st.id},
                               {"style", to_string(st.style)},
                               {"actions", prep},
                               {"noutanDegree", noutan_degree(p.style)},
                               {"kasureDegree", [&] {
                                    const KasureDegree k = kasure_degree(st.points, st.thickness, p.style);
                                    return k.infinite ? json(nullptr) : json(k.value);
                                }()}});
            }
            store_text(p, kStylesJson, out.dump() + "\n");
            record(p, s, {kStylesJson});
            break;
        }
        case Stage::Compile: {
            const MappedDocument mapped = load_mapped(p);
            const json styles = json::parse(read_file(p.path(kStylesJson)));
            std::vector<StrokePlan> plans;
            for (size_t i = 0; i < mapped.strokes.size(); ++i) {
                StrokePlan plan{&mapped.strokes[i], {}};
                for (const auto& e : styles)
                    if (e.at("id").get<int>() == mapped.strokes[i].id) plan.prep = e.at("actions").get<std::vector<BrushAction>>();
                plans.push_back(std::move(plan));
            }
            const RobotProgram prog = compile_program(plans, p.arm, p.frame, p.calibration);
            store_text(p, kProgramJsonl, to_jsonl(prog));
            record(p, s, {kProgramJsonl});
            break;
        }
        case Stage::Simulate: {
            const RobotProgram prog = load_program(p);
            CanvasRaster canvas = make_canvas(p.frame, p.canvas_px_per_mm);
            BrushState brush = BrushState::full();
            execute_program(prog, brush, canvas, p.style, p.calibration, p.sim);
            store_png(p, kCanvasPng, [&](const auto& path) { write_canvas_png(canvas, path); });
            record(p, s, {kCanvasPng});
            break;
        }
    }
    save_project(p);
}

void run_through(Project& p, Stage to, Stage from) {
    for (Stage s : kStages)
        if (s >= from && s <= to) run_stage(p, s);
}

ContourImage load_contour_artifact(const Project& p) { return read_tagged_contours(p); }

std::vector<OptimizedStroke> load_strokes(const Project& p) {
    return json::parse(read_file(p.path(kStrokesJson))).at("strokes").get<std::vector<OptimizedStroke>>();
}

MappedDocument load_mapped(const Project& p) { return json::parse(read_file(p.path(kMappedJson))).get<MappedDocument>(); }

RobotProgram load_program(const Project& p) { return parse_jsonl(read_file(p.path(kProgramJsonl))); }

CanvasRaster render_preview(const Project& p, double px_per_mm) {
    const auto strokes = optimize_document(p, p.editor.document(), nullptr);
    CanvasRaster canvas = make_canvas(p.frame, px_per_mm);
    if (strokes.empty()) return canvas;
    const MappedDocument mapped = map_strokes(strokes, p.px_to_mm, p.frame, p.calibration);
    const RobotProgram prog = compile_program(plans_for(mapped, p), p.arm, p.frame, p.calibration);
    BrushState brush = BrushState::full();
    execute_program(prog, brush, canvas, p.style, p.calibration, p.sim);
    return canvas;
}

std::string canvas_hash(const CanvasRaster& canvas) {
    const auto gray = canvas_gray(canvas);
    Hasher h;
    h.add(std::to_string(canvas.width) + "x" + std::to_string(canvas.height));
    h.add(std::string_view(reinterpret_cast<const char*>(gray.data()), gray.size()));
    return h.hex();
}

}  // namespace inkbot
