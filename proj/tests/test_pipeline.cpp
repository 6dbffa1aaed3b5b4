#include "inkbot/geometry/primitives.hpp"
#include "inkbot/image/image.hpp"
#include "inkbot/pipeline/hash.hpp"
#include "inkbot/pipeline/report.hpp"
#include "inkbot/pipeline/service.hpp"
#include "inkbot/pipeline/stages.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>
#include <httplib.h>

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <thread>

using namespace inkbot;
namespace fs = std::filesystem;

namespace {

Viewpoint torus_view() {
    Viewpoint v;
    v.eye = {0.3, -3.2, 2.6};
    v.target = {0, 0, 0};
    v.up = {0, 0, 1};
    v.image_width = v.image_height = 256;
    return v;
}

fs::path torus_mesh(const fs::path& dir) {
    const auto path = dir / "torus.obj";
    if (!fs::exists(path)) save_obj(primitives::torus(1.0, 0.4, 64, 24), path);
    return path;
}

Project torus_project(const std::string& name) {
    const auto dir = testutil::temp_dir(name);
    return create_project(dir / "proj", name, torus_mesh(dir), torus_view());
}

std::map<std::string, std::string> artifact_bytes(const Project& p) {
    std::map<std::string, std::string> out;
    for (const auto& [stage, rec] : p.artifacts)
        for (const auto& f : rec.files) out[f] = read_file(p.path(f));
    return out;
}

json post_edit(ApiService& api, const std::string& id, long revision, const json& op, int* status = nullptr) {
    const auto r = api.handle("POST", "/api/projects/" + id + "/edits", json{{"revision", revision}, {"op", op}}.dump());
    if (status) *status = r.status;
    return r.json();
}

long revision_of(ApiService& api, const std::string& id) {
    return api.handle("GET", "/api/projects/" + id).json().at("revision").get<long>();
}

}  // namespace

// ---- hashing and atomic writes

TEST(Hash, KnownDigestsAndFieldFraming) {
    EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    Hasher a, b, c;
    a.add("ab").add("c");
    b.add("a").add("bc");
    c.add("ab").add("c");
    const auto ha = a.hex();
    EXPECT_NE(ha, b.hex());
    EXPECT_EQ(ha, c.hex());
}

TEST(Hash, AtomicWriteReplacesWholeFile) {
    const auto dir = testutil::temp_dir("atomic");
    const auto f = dir / "sub" / "x.json";
    write_atomic(f, "old content that is long");
    write_atomic(f, "new");
    EXPECT_EQ(read_file(f), "new");
    int entries = 0;
    for ([[maybe_unused]] auto& e : fs::directory_iterator(dir / "sub")) ++entries;
    EXPECT_EQ(entries, 1);  // no temp files left behind
}

TEST(Hash, InterruptedWriteLeavesOldProject) {
    Project p = torus_project("interrupted");
    const std::string before = read_file(p.path("project.json"));
    // a writer killed before its rename leaves only a sibling temp file
    std::ofstream(p.path("project.json.tmp999_0")) << "{\"trunc";
    const Project back = load_project(p.dir);
    EXPECT_EQ(project_to_json(back).dump(), project_to_json(p).dump());
    EXPECT_EQ(read_file(p.path("project.json")), before);
}

// ---- project file and stages

TEST(Project, RoundTrip) {
    Project p = torus_project("roundtrip");
    p.style.lambda = 0.25;
    p.px_to_mm = 0.3;
    save_project(p);
    const Project q = load_project(p.dir);
    EXPECT_EQ(project_to_json(q).dump(), project_to_json(p).dump());
    EXPECT_EQ(q.view, p.view);
    EXPECT_EQ(q.calibration, default_calibration());
    EXPECT_THROW(load_project(p.dir / "nowhere"), std::exception);
}

TEST(Stages, FullRunFreshnessAndArtifacts) {
    Project p = torus_project("full");
    for (Stage s : kStages) EXPECT_EQ(freshness(p, s), Freshness::Missing);
    EXPECT_THROW(run_stage(p, Stage::Simplify), StaleError);
    run_through(p, Stage::Simulate);
    for (Stage s : kStages) EXPECT_EQ(freshness(p, s), Freshness::Fresh) << to_string(s);
    EXPECT_TRUE(fs::exists(p.path("artifacts/canvas.png")));
    EXPECT_TRUE(fs::exists(p.path("artifacts/program.jsonl")));

    // contour PNG contract: 8-bit gray at the view size, paper white, ink dark
    int w = 0, h = 0;
    const auto gray = read_gray8_png(p.path("artifacts/contours.png"), w, h);
    EXPECT_EQ(w, 256);
    EXPECT_EQ(h, 256);
    EXPECT_EQ(gray.front(), 255);
    EXPECT_GT(std::count_if(gray.begin(), gray.end(), [](auto g) { return g < 128; }), 100);
    // the tag PNG stores the family bitmask; every solid ink pixel has one
    const auto tags = read_gray8_png(p.path("artifacts/contour_tags.png"), w, h);
    ASSERT_EQ(tags.size(), gray.size());
    for (size_t i = 0; i < tags.size(); ++i) {
        EXPECT_LE(tags[i], 7);
        if (gray[i] < 128) EXPECT_NE(tags[i], 0);
    }
    // the torus seen from above shows its outer and inner silhouettes
    const auto& doc = p.editor.document();
    EXPECT_GE(doc.candidates.size(), 2u);
    EXPECT_FALSE(doc.selected.empty());
    const auto strokes = load_strokes(p);
    EXPECT_EQ(strokes.size(), doc.selected.size());
    const auto prog = load_program(p);
    EXPECT_EQ(to_jsonl(prog), read_file(p.path("artifacts/program.jsonl")));
}

TEST(Stages, EditMakesDownstreamStale) {
    Project p = torus_project("stale");
    run_through(p, Stage::Simulate);
    const auto& doc = p.editor.document();
    int free_idx = -1;
    for (size_t i = 0; i < doc.candidates.size(); ++i)
        if (!doc.candidates[i].outside) free_idx = static_cast<int>(i);
    ASSERT_GE(free_idx, 0);
    p.editor.apply(EditOp::pick(free_idx));
    EXPECT_EQ(freshness(p, Stage::Vectorize), Freshness::Fresh);
    EXPECT_EQ(freshness(p, Stage::Optimize), Freshness::Stale);
    EXPECT_EQ(freshness(p, Stage::Simulate), Freshness::Stale);
    try {
        run_stage(p, Stage::Compile);
        FAIL() << "compile should be rejected";
    } catch (const StaleError& e) {
        EXPECT_EQ(e.rerun, Stage::Optimize);
    }
    run_through(p, Stage::Simulate, Stage::Optimize);
    EXPECT_EQ(freshness(p, Stage::Simulate), Freshness::Fresh);
    EXPECT_EQ(load_strokes(p).size(), p.editor.document().selected.size());
}

TEST(Stages, RerunIsByteIdentical) {
    Project p = torus_project("rerun_a");
    run_through(p, Stage::Simulate);
    const auto first = artifact_bytes(p);
    run_through(p, Stage::Simulate);
    EXPECT_EQ(artifact_bytes(p), first);

    Project q = torus_project("rerun_b");
    run_through(q, Stage::Simulate);
    EXPECT_EQ(artifact_bytes(q), first);
    EXPECT_EQ(q.artifacts.at(Stage::Simulate).output_hash, p.artifacts.at(Stage::Simulate).output_hash);
}

TEST(Stages, ExternalSimplifierContract) {
    Project p = torus_project("external");
    run_stage(p, Stage::Contours);
    p.simplifier = "external";
    p.simplifier_command = "cp";
    EXPECT_EQ(freshness(p, Stage::Contours), Freshness::Fresh);
    run_stage(p, Stage::Simplify);
    EXPECT_EQ(read_file(p.path("artifacts/simplified.png")), read_file(p.path("artifacts/contours.png")));
    p.simplifier_command = "false";
    EXPECT_EQ(freshness(p, Stage::Simplify), Freshness::Stale);
    EXPECT_THROW(run_stage(p, Stage::Simplify), std::exception);
}

TEST(Stages, PreviewIsReducedAndLeavesArtifactsAlone) {
    Project p = torus_project("preview");
    run_through(p, Stage::Vectorize);
    const auto before = artifact_bytes(p);
    const CanvasRaster c = render_preview(p);
    EXPECT_EQ(c.px_per_mm, 2.0);
    EXPECT_GT(c.total(), 0);
    EXPECT_EQ(artifact_bytes(p), before);
    EXPECT_EQ(canvas_hash(c), canvas_hash(render_preview(p)));
}

// ---- HTTP API

class ApiTest : public ::testing::Test {
protected:
    void SetUp() override {
        root = testutil::temp_dir(std::string("api_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
        mesh = torus_mesh(root.parent_path());
        api = std::make_unique<ApiService>(root / "projects");
        const auto r = api->handle("POST", "/api/projects",
                                   json{{"id", "t"}, {"mesh", mesh.string()}, {"view", torus_view()}}.dump());
        ASSERT_EQ(r.status, 201) << r.body;
        for (const char* s : {"contours", "simplify", "vectorize"})
            ASSERT_EQ(api->handle("POST", std::string("/api/projects/t/stages/") + s).status, 200) << s;
    }

    int free_candidate() {
        const auto c = api->handle("GET", "/api/projects/t/candidates").json();
        for (const auto& cand : c.at("candidates"))
            if (!cand.at("outside").get<bool>()) return cand.at("index").get<int>();
        return -1;
    }

    fs::path root, mesh;
    std::unique_ptr<ApiService> api;
};

TEST_F(ApiTest, RouteTableAndListing) {
    const auto t = api->handle("GET", "/api");
    EXPECT_EQ(t.status, 200);
    EXPECT_EQ(t.json(), ApiService::route_table());
    // every documented route names a method and a path
    for (const auto& r : t.json()) {
        EXPECT_TRUE(r.contains("method"));
        EXPECT_TRUE(r.contains("path"));
    }
    EXPECT_EQ(api->handle("GET", "/api/projects").json().at("projects"), json::array({"t"}));
    EXPECT_EQ(api->handle("GET", "/").content_type, "text/html");
}

TEST_F(ApiTest, CandidatesCarryFamilies) {
    const auto c = api->handle("GET", "/api/projects/t/candidates").json();
    ASSERT_FALSE(c.at("candidates").empty());
    for (const auto& cand : c.at("candidates")) {
        const auto fam = cand.at("family").get<std::string>();
        EXPECT_TRUE(fam == "OC" || fam == "SC" || fam == "AR") << fam;
        EXPECT_GE(cand.at("points").size(), 2u);
    }
}

TEST_F(ApiTest, EditsBumpRevisionAndReplay) {
    long rev = revision_of(*api, "t");
    const int idx = free_candidate();
    ASSERT_GE(idx, 0);
    int status = 0;
    auto r = post_edit(*api, "t", rev, {{"kind", "pick"}, {"candidate", idx}}, &status);
    EXPECT_EQ(status, 200);
    EXPECT_EQ(r.at("revision").get<long>(), rev + 1);
    r = post_edit(*api, "t", rev + 1, {{"kind", "insert"}, {"points", {{10, 10}, {40, 12}, {70, 20}}}}, &status);
    EXPECT_EQ(status, 200);
    // double pick warns and changes nothing
    r = post_edit(*api, "t", rev + 2, {{"kind", "pick"}, {"candidate", idx}}, &status);
    EXPECT_EQ(status, 200);
    EXPECT_TRUE(r.contains("warning"));
    EXPECT_EQ(r.at("revision").get<long>(), rev + 2);

    const auto doc = api->handle("GET", "/api/projects/t/document").json();
    const auto log = api->handle("GET", "/api/projects/t/log").json();
    const Project p = load_project(root / "projects" / "t");
    const auto replayed = Editor::replay(p.editor.initial(), log.at("log").get<std::vector<EditOp>>());
    EXPECT_EQ(json(replayed), doc.at("document"));

    EXPECT_EQ(api->handle("POST", "/api/projects/t/undo", json{{"revision", rev + 2}}.dump()).status, 200);
    EXPECT_EQ(revision_of(*api, "t"), rev + 3);
}

TEST_F(ApiTest, ErrorsCarryDiagnostics) {
    const long rev = revision_of(*api, "t");
    int status = 0;
    auto ins = [&](double x0, long r) {
        return post_edit(*api, "t", r, {{"kind", "insert"}, {"points", {{x0, 5}, {x0 + 20, 5}}}}, &status);
    };
    ins(10, rev);
    ins(230, rev + 1);
    const auto doc = api->handle("GET", "/api/projects/t/document").json().at("document");
    const auto& sel = doc.at("selected");
    const int a = sel[sel.size() - 2].at("id"), b = sel[sel.size() - 1].at("id");
    auto r = post_edit(*api, "t", rev + 2, {{"kind", "merge"}, {"a", a}, {"b", b}}, &status);
    EXPECT_EQ(status, 422);
    EXPECT_NEAR(r.at("distance").get<double>(), 200.0, 1e-9);
    EXPECT_EQ(r.at("radius").get<double>(), kMergeRadius);

    r = post_edit(*api, "t", rev + 2, {{"kind", "delete"}, {"id", 9999}}, &status);
    EXPECT_EQ(status, 400);
    EXPECT_TRUE(r.contains("error"));
    r = post_edit(*api, "t", rev, {{"kind", "resplit"}, {"mu", 200}}, &status);
    EXPECT_EQ(status, 409);
    EXPECT_EQ(r.at("revision").get<long>(), rev + 2);

    EXPECT_EQ(api->handle("GET", "/api/projects/nope").status, 404);
    EXPECT_EQ(api->handle("GET", "/api/projects/t/artifacts/canvas.png").status, 404);
    EXPECT_EQ(api->handle("POST", "/api/projects/t/edits", "{not json").status, 400);
    EXPECT_EQ(api->handle("POST", "/api/projects/t/stages/paint").status, 400);
    EXPECT_EQ(api->handle("POST", "/api/projects", json{{"id", "../x"}, {"mesh", mesh.string()}}.dump()).status, 400);
    EXPECT_EQ(api->handle("POST", "/api/projects", json{{"id", "t"}, {"mesh", mesh.string()}}.dump()).status, 409);
}

TEST_F(ApiTest, StaleStagesAndArtifacts) {
    for (const char* s : {"optimize", "map", "styles", "compile", "simulate"})
        ASSERT_EQ(api->handle("POST", std::string("/api/projects/t/stages/") + s).status, 200) << s;
    const auto png = api->handle("GET", "/api/projects/t/artifacts/canvas.png");
    EXPECT_EQ(png.status, 200);
    EXPECT_EQ(png.content_type, "image/png");
    EXPECT_EQ(png.body.substr(1, 3), "PNG");

    const long rev = revision_of(*api, "t");
    const auto doc = api->handle("GET", "/api/projects/t/document").json().at("document");
    int status = 0;
    post_edit(*api, "t", rev, {{"kind", "delete"}, {"id", doc.at("selected")[0].at("id")}}, &status);
    ASSERT_EQ(status, 200);
    const auto rej = api->handle("POST", "/api/projects/t/stages/compile");
    EXPECT_EQ(rej.status, 412);
    EXPECT_EQ(rej.json().at("rerun"), "optimize");
    const auto stale = api->handle("GET", "/api/projects/t/artifacts/canvas.png");
    EXPECT_EQ(stale.status, 412);
    EXPECT_EQ(api->handle("GET", "/api/projects/t/artifacts/contours.png").status, 200);
}

TEST_F(ApiTest, PreviewIsPng) {
    const auto r = api->handle("GET", "/api/projects/t/preview");
    EXPECT_EQ(r.status, 200);
    EXPECT_EQ(r.content_type, "image/png");
    const auto f = root / "preview.png";
    std::ofstream(f, std::ios::binary) << r.body;
    int w = 0, h = 0;
    read_gray8_png(f, w, h);
    const WorkspaceFrame frame;
    EXPECT_EQ(w, static_cast<int>(std::lround((frame.paper_max.x() - frame.paper_min.x()) * 2)));
    EXPECT_GT(h, 0);
}

TEST_F(ApiTest, ConcurrentConflictingEditsOneWins) {
    for (int round = 0; round < 5; ++round) {
        const long rev = revision_of(*api, "t");
        std::atomic<int> accepted{0}, conflicts{0};
        auto worker = [&](double y) {
            int status = 0;
            post_edit(*api, "t", rev, {{"kind", "insert"}, {"points", {{10, y}, {60, y}}}}, &status);
            if (status == 200) ++accepted;
            if (status == 409) ++conflicts;
        };
        std::thread t1(worker, 10.0 + round), t2(worker, 100.0 + round);
        t1.join();
        t2.join();
        EXPECT_EQ(accepted.load(), 1);
        EXPECT_EQ(conflicts.load(), 1);
        EXPECT_EQ(revision_of(*api, "t"), rev + 1);
    }
}

TEST_F(ApiTest, HttpServerServesApi) {
    HttpServer server(*api);
    const int port = server.start("127.0.0.1", 0);
    ASSERT_GT(port, 0);
    httplib::Client cli("127.0.0.1", port);
    auto res = cli.Get("/api/projects/t");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);
    EXPECT_EQ(json::parse(res->body).at("id"), "t");
    const long rev = json::parse(res->body).at("revision").get<long>();
    res = cli.Post("/api/projects/t/edits", json{{"revision", rev - 1}, {"op", {{"kind", "resplit"}, {"mu", 100}}}}.dump(),
                   "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 409);
    res = cli.Get("/api/projects/t/preview");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->get_header_value("Content-Type"), "image/png");
    server.stop();
}

// ---- report and CLI

TEST(Report, ContainsTablesAndSweep) {
    const json r = build_report(nullptr);
    EXPECT_EQ(r.at("contingence").at("rows").size(), 5u);
    EXPECT_EQ(r.at("styleSweep").size(), 12u);
    EXPECT_LE(r.at("contingence").at("meanOptimized").get<double>(),
              r.at("contingence").at("meanUnoptimized").get<double>());
}

TEST(Cli, IngestRunStatus) {
    const auto dir = testutil::temp_dir("cli");
    const auto mesh = torus_mesh(dir);
    std::ofstream(dir / "view.json") << json(torus_view()).dump();
    const std::string exe = INKBOT_CLI;
    const auto proj = dir / "p";
    auto run = [&](const std::string& args) { return std::system((exe + " " + args + " > " + (dir / "out.txt").string() + " 2>&1").c_str()); };
    ASSERT_EQ(run("ingest " + proj.string() + " --mesh " + mesh.string() + " --view " + (dir / "view.json").string()), 0)
        << read_file(dir / "out.txt");
    ASSERT_EQ(run("run " + proj.string()), 0) << read_file(dir / "out.txt");
    EXPECT_TRUE(fs::exists(proj / "artifacts" / "canvas.png"));
    ASSERT_EQ(run("status " + proj.string()), 0);
    const std::string status = read_file(dir / "out.txt");
    EXPECT_NE(status.find("simulate"), std::string::npos);
    EXPECT_EQ(status.find("stale"), std::string::npos);
    EXPECT_NE(run("compile " + (dir / "missing").string()), 0);
    EXPECT_NE(run("bogus"), 0);
}
