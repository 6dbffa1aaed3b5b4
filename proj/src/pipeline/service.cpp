#include "inkbot/pipeline/service.hpp"

#include "inkbot/pipeline/hash.hpp"
#include "inkbot/pipeline/stages.hpp"

#include <httplib.h>

#include <regex>
#include <sstream>

namespace inkbot {

namespace {

ApiResponse ok(const json& j, int status = 200) { return {status, j.dump(), "application/json"}; }

ApiResponse error(int status, const std::string& msg, json extra = json::object()) {
    extra["error"] = msg;
    return {status, extra.dump(), "application/json"};
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::stringstream ss(path);
    std::string p;
    while (std::getline(ss, p, '/'))
        if (!p.empty()) parts.push_back(p);
    return parts;
}

bool valid_id(const std::string& id) { return std::regex_match(id, std::regex("[A-Za-z0-9_-]{1,64}")); }

json candidates_json(const StrokeDocument& d) {
    json out = json::array();
    for (size_t i = 0; i < d.candidates.size(); ++i) {
        json c = d.candidates[i];
        c["index"] = i;
        out.push_back(c);
    }
    return out;
}

json summary(const Project& p) {
    json stages = json::object();
    for (Stage s : kStages) stages[to_string(s)] = to_string(freshness(p, s));
    const auto& d = p.editor.document();
    return {{"id", p.id},
            {"revision", p.editor.revision()},
            {"stages", stages},
            {"candidateCount", d.candidates.size()},
            {"selectedCount", d.selected.size()}};
}

std::string content_type_for(const std::string& name) {
    if (name.ends_with(".png")) return "image/png";
    if (name.ends_with(".jsonl")) return "application/x-ndjson";
    if (name.ends_with(".json")) return "application/json";
    if (name.ends_with(".html")) return "text/html";
    if (name.ends_with(".js")) return "text/javascript";
    if (name.ends_with(".css")) return "text/css";
    return "application/octet-stream";
}

}  // namespace

ApiService::ApiService(std::filesystem::path root, std::filesystem::path ui_dir)
    : root_(std::move(root)), ui_dir_(std::move(ui_dir)) {
    std::filesystem::create_directories(root_);
}

json ApiService::route_table() {
    const json op = {{"kind", "pick|delete|merge|insert|resplit|set_params|set_style"},
                     {"candidate", "int (pick)"},
                     {"id", "int (delete, set_style)"},
                     {"a", "int (merge)"},
                     {"b", "int (merge)"},
                     {"points", "[[x,y],...] (insert)"},
                     {"mu", "number (resplit)"},
                     {"tMin", "number (set_params)"},
                     {"tMax", "number (set_params)"},
                     {"style", "noutan|kasure|plain (set_style)"}};
    return json::array({
        {{"method", "GET"}, {"path", "/api"}, {"response", "this table"}},
        {{"method", "GET"}, {"path", "/api/projects"}, {"response", {{"projects", "[id]"}}}},
        {{"method", "POST"}, {"path", "/api/projects"},
         {"request", {{"id", "string"}, {"mesh", "path to .obj"}, {"view", "Viewpoint (optional)"},
                      {"autoPickMinLength", "number (optional)"}}},
         {"response", "project summary, 201"}},
        {{"method", "GET"}, {"path", "/api/projects/{id}"},
         {"response", {{"id", "string"}, {"revision", "int"}, {"stages", "{stage: missing|stale|fresh}"},
                       {"candidateCount", "int"}, {"selectedCount", "int"}}}},
        {{"method", "GET"}, {"path", "/api/projects/{id}/document"},
         {"response", {{"revision", "int"}, {"document", "StrokeDocument"}}}},
        {{"method", "GET"}, {"path", "/api/projects/{id}/candidates"},
         {"response", {{"revision", "int"},
                       {"candidates", "[{index, family: OC|SC|AR, outside, closed, points}]"}}}},
        {{"method", "GET"}, {"path", "/api/projects/{id}/log"}, {"response", {{"revision", "int"}, {"log", "[EditOp]"}}}},
        {{"method", "POST"}, {"path", "/api/projects/{id}/edits"},
         {"request", {{"revision", "int, the revision the client edited"}, {"op", op}}},
         {"response", {{"revision", "int"}, {"warning", "string"}, {"selected", "[EditableStroke]"}}},
         {"errors", {{"409", "{error, revision}: stale revision"},
                     {"422", "{error, distance, radius}: merge endpoints too far"},
                     {"400", "{error}: rejected edit"}}}},
        {{"method", "POST"}, {"path", "/api/projects/{id}/undo"}, {"request", {{"revision", "int"}}},
         {"response", {{"revision", "int"}}}},
        {{"method", "POST"}, {"path", "/api/projects/{id}/stages/{stage}"},
         {"response", {{"stage", "string"}, {"state", "fresh"}, {"outputHash", "sha256"}, {"revision", "int"}}},
         {"errors", {{"412", "{error, rerun}: upstream stage missing or stale"}}}},
        {{"method", "GET"}, {"path", "/api/projects/{id}/artifacts/{file}"},
         {"response", "artifact bytes (png, json, jsonl)"},
         {"errors", {{"404", "not produced"}, {"412", "{error, rerun}: artifact stale"}}}},
        {{"method", "GET"}, {"path", "/api/projects/{id}/preview"}, {"response", "image/png simulated preview"}},
        {{"method", "GET"}, {"path", "/"}, {"response", "editor UI bundle"}},
    });
}

std::shared_ptr<ApiService::Entry> ApiService::entry(const std::string& id) {
    std::lock_guard lock(map_mu_);
    auto it = projects_.find(id);
    if (it != projects_.end()) return it->second;
    const auto dir = root_ / id;
    if (!std::filesystem::exists(dir / "project.json")) return nullptr;
    auto e = std::make_shared<Entry>();
    e->project = load_project(dir);
    projects_[id] = e;
    return e;
}

ApiResponse ApiService::create(const json& body) {
    const std::string id = body.at("id").get<std::string>();
    if (!valid_id(id)) return error(400, "invalid project id");
    std::lock_guard lock(map_mu_);
    if (projects_.count(id) || std::filesystem::exists(root_ / id / "project.json"))
        return error(409, "project exists", {{"id", id}});
    Viewpoint view;
    read_opt(body, "view", view);
    Project p = create_project(root_ / id, id, body.at("mesh").get<std::string>(), view);
    read_opt(body, "autoPickMinLength", p.auto_pick_min_length);
    save_project(p);
    auto e = std::make_shared<Entry>();
    e->project = std::move(p);
    projects_[id] = e;
    return ok(summary(e->project), 201);
}

ApiResponse ApiService::project_route(const std::string& method, const std::vector<std::string>& parts,
                                      const std::string& body) {
    const auto e = entry(parts[2]);
    if (!e) return error(404, "no such project", {{"id", parts[2]}});
    std::lock_guard lock(e->mu);
    Project& p = e->project;
    const std::string sub = parts.size() > 3 ? parts[3] : "";

    if (method == "GET" && sub.empty()) return ok(summary(p));
    if (method == "GET" && sub == "document" && parts.size() == 4)
        return ok({{"revision", p.editor.revision()}, {"document", p.editor.document()}});
    if (method == "GET" && sub == "candidates" && parts.size() == 4)
        return ok({{"revision", p.editor.revision()}, {"candidates", candidates_json(p.editor.document())}});
    if (method == "GET" && sub == "log" && parts.size() == 4)
        return ok({{"revision", p.editor.revision()}, {"log", p.editor.log()}});

    if (method == "POST" && (sub == "edits" || sub == "undo") && parts.size() == 4) {
        const json req = body.empty() ? json::object() : json::parse(body);
        if (!req.contains("revision")) return error(400, "missing revision");
        const long rev = req.at("revision").get<long>();
        if (rev != p.editor.revision())
            return error(409, "revision conflict", {{"revision", p.editor.revision()}, {"yours", rev}});
        Editor next = p.editor;
        std::string warning;
        if (sub == "undo") {
            if (!next.undo()) return error(400, "nothing to undo");
        } else {
            try {
                warning = next.apply(req.at("op").get<EditOp>());
            } catch (const MergeDistanceError& m) {
                return error(422, m.what(), {{"distance", m.distance}, {"radius", m.radius}});
            }
        }
        Project updated = p;
        updated.editor = std::move(next);
        save_project(updated);
        p = std::move(updated);
        json out = {{"revision", p.editor.revision()}, {"selected", p.editor.document().selected}};
        if (!warning.empty()) out["warning"] = warning;
        return ok(out);
    }

    if (method == "POST" && sub == "stages" && parts.size() == 5) {
        const Stage s = stage_from_string(parts[4]);
        Project updated = p;
        try {
            run_stage(updated, s);
        } catch (const StaleError& st) {
            return error(412, st.what(), {{"rerun", to_string(st.rerun)}});
        }
        p = std::move(updated);
        return ok({{"stage", to_string(s)},
                   {"state", to_string(freshness(p, s))},
                   {"outputHash", p.artifacts.at(s).output_hash},
                   {"revision", p.editor.revision()}});
    }

    if (method == "GET" && sub == "artifacts" && parts.size() == 5) {
        const std::string rel = "artifacts/" + parts[4];
        for (const auto& [stage, rec] : p.artifacts)
            for (const auto& f : rec.files)
                if (f == rel) {
                    const Freshness fr = freshness(p, stage);
                    if (fr != Freshness::Fresh)
                        return error(412, "artifact " + parts[4] + " is " + to_string(fr), {{"rerun", to_string(stage)}});
                    return {200, read_file(p.path(f)), content_type_for(f)};
                }
        return error(404, "no such artifact", {{"name", parts[4]}});
    }

    if (method == "GET" && sub == "preview" && parts.size() == 4) {
        const CanvasRaster canvas = render_preview(p);
        const auto tmp = p.path("artifacts/preview.png.part" + std::to_string(std::hash<std::thread::id>{}(std::this_thread::get_id())));
        std::filesystem::create_directories(tmp.parent_path());
        write_canvas_png(canvas, tmp);
        std::string bytes = read_file(tmp);
        std::filesystem::remove(tmp);
        return {200, std::move(bytes), "image/png"};
    }
    return error(404, "no such route");
}

ApiResponse ApiService::static_file(const std::string& path) const {
    std::string rel = path == "/" ? "index.html" : path.substr(path.rfind("/ui/", 0) == 0 ? 4 : 1);
    if (rel.find("..") != std::string::npos) return error(400, "bad path");
    if (!ui_dir_.empty() && std::filesystem::is_regular_file(ui_dir_ / rel))
        return {200, read_file(ui_dir_ / rel), content_type_for(rel)};
    if (rel == "index.html")
        return {200,
                "<!doctype html><title>inkbot</title><p>Editor UI bundle not installed. API routes: <a "
                "href=\"/api\">/api</a></p>\n",
                "text/html"};
    return error(404, "not found");
}

ApiResponse ApiService::handle(const std::string& method, const std::string& path, const std::string& body) {
    try {
        const auto parts = split_path(path);
        if (parts.empty() || parts[0] != "api") {
            if (method == "GET") return static_file(path);
            return error(404, "no such route");
        }
        if (parts.size() == 1 && method == "GET") return ok(route_table());
        if (parts.size() == 2 && parts[1] == "projects") {
            if (method == "GET") {
                json ids = json::array();
                for (const auto& d : std::filesystem::directory_iterator(root_))
                    if (std::filesystem::exists(d.path() / "project.json")) ids.push_back(d.path().filename().string());
                std::sort(ids.begin(), ids.end());
                return ok({{"projects", ids}});
            }
            if (method == "POST") return create(json::parse(body));
        }
        if (parts.size() >= 3 && parts[1] == "projects") return project_route(method, parts, body);
        return error(404, "no such route");
    } catch (const json::exception& e) {
        return error(400, std::string("bad request: ") + e.what());
    } catch (const InvalidInput& e) {
        return error(400, e.what());
    } catch (const std::exception& e) {
        return error(500, e.what());
    }
}

struct HttpServer::Impl {
    ApiService& api;
    httplib::Server server;
    std::thread thread;

    explicit Impl(ApiService& a) : api(a) {
        auto handler = [this](const httplib::Request& req, httplib::Response& res) {
            const ApiResponse r = api.handle(req.method, req.path, req.body);
            res.status = r.status;
            res.set_content(r.body, r.content_type);
        };
        server.Get(R"(/.*)", handler);
        server.Post(R"(/.*)", handler);
    }
};

HttpServer::HttpServer(ApiService& api) : impl_(std::make_unique<Impl>(api)) {}

HttpServer::~HttpServer() { stop(); }

int HttpServer::start(const std::string& host, int port) {
    const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return bound;
}

bool HttpServer::listen(const std::string& host, int port) { return impl_->server.listen(host, port); }

void HttpServer::stop() {
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace inkbot
