#include "inkbot/io/json.hpp"
#include "inkbot/pipeline/hash.hpp"
#include "inkbot/pipeline/report.hpp"
#include "inkbot/pipeline/service.hpp"
#include "inkbot/pipeline/stages.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace inkbot;

namespace {

void print_status(const Project& p) {
    for (Stage s : kStages) std::cout << to_string(s) << ": " << to_string(freshness(p, s)) << "\n";
}

int run_stages(const std::string& dir, std::initializer_list<Stage> stages) {
    Project p = load_project(dir);
    for (Stage s : stages) {
        run_stage(p, s);
        std::cout << to_string(s) << " " << p.artifacts.at(s).output_hash << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line drawing to robot ink painting pipeline"};
    app.require_subcommand(1);

    std::string dir;
    std::string mesh, view_file, id, simplifier, command, op, op_file, host = "127.0.0.1", ui_dir, out_file;
    double auto_pick = 40;
    std::uint64_t seed = 1;
    int port = 8080;
    bool serve = false;

    auto* ingest = app.add_subcommand("ingest", "Create a project from a mesh");
    ingest->add_option("dir", dir, "Project directory")->required();
    ingest->add_option("--mesh", mesh, "OBJ mesh")->required()->check(CLI::ExistingFile);
    ingest->add_option("--view", view_file, "Viewpoint JSON")->check(CLI::ExistingFile);
    ingest->add_option("--id", id, "Project id (defaults to the directory name)");
    ingest->add_option("--auto-pick", auto_pick, "Pick candidates at least this long (px) when vectorizing");
    ingest->add_option("--seed", seed, "Simulator seed");

    std::map<std::string, CLI::App*> stage_cmds;
    for (const char* name : {"contours", "simplify", "vectorize", "optimize", "map", "compile", "simulate"}) {
        auto* c = app.add_subcommand(name, std::string("Run the ") + name + " stage");
        c->add_option("dir", dir, "Project directory")->required();
        stage_cmds[name] = c;
    }
    stage_cmds["simplify"]->add_option("--simplifier", simplifier, "classic or external")
        ->check(CLI::IsMember({"classic", "external"}));
    stage_cmds["simplify"]->add_option("--command", command, "External simplifier: CMD IN.png OUT.png");

    auto* run = app.add_subcommand("run", "Run every stage");
    run->add_option("dir", dir, "Project directory")->required();

    auto* status = app.add_subcommand("status", "Show stage freshness");
    status->add_option("dir", dir, "Project directory")->required();

    auto* edit = app.add_subcommand("edit", "Apply an edit op or serve the HTTP API");
    edit->add_option("dir", dir, "Project directory (with --serve: directory holding projects)")->required();
    edit->add_option("--op", op, "Edit op JSON, e.g. {\"kind\":\"pick\",\"candidate\":3}");
    edit->add_option("--op-file", op_file, "File with one edit op JSON per line")->check(CLI::ExistingFile);
    edit->add_flag("--serve", serve, "Serve the HTTP API and editor UI");
    edit->add_option("--host", host, "Bind address");
    edit->add_option("--port", port, "Port");
    edit->add_option("--ui", ui_dir, "Editor UI bundle directory");

    auto* report = app.add_subcommand("report", "Metric and style-sweep report");
    report->add_option("dir", dir, "Project directory (optional)");
    report->add_option("--out", out_file, "Write JSON here instead of stdout");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) {
            Viewpoint view;
            if (!view_file.empty()) view = json::parse(read_file(view_file)).get<Viewpoint>();
            const std::string pid = id.empty() ? std::filesystem::path(dir).filename().string() : id;
            Project p = create_project(dir, pid, mesh, view);
            p.auto_pick_min_length = auto_pick;
            p.sim.seed = seed;
            save_project(p);
            std::cout << "created " << pid << " in " << dir << "\n";
            return 0;
        }
        for (const auto& [name, cmd] : stage_cmds) {
            if (!cmd->parsed()) continue;
            if (name == "simplify" && (!simplifier.empty() || !command.empty())) {
                Project p = load_project(dir);
                if (!simplifier.empty()) p.simplifier = simplifier;
                if (!command.empty()) p.simplifier_command = command;
                save_project(p);
            }
            if (name == "compile") return run_stages(dir, {Stage::Styles, Stage::Compile});
            return run_stages(dir, {stage_from_string(name)});
        }
        if (run->parsed()) {
            Project p = load_project(dir);
            for (Stage s : kStages) {
                run_stage(p, s);
                std::cout << to_string(s) << " " << p.artifacts.at(s).output_hash << "\n";
            }
            std::cout << "strokes " << p.editor.document().selected.size() << "\n";
            return 0;
        }
        if (status->parsed()) {
            print_status(load_project(dir));
            return 0;
        }
        if (edit->parsed()) {
            if (serve) {
                ApiService api(dir, ui_dir);
                HttpServer server(api);
                std::cout << "serving " << dir << " on http://" << host << ":" << port << "\n" << std::flush;
                return server.listen(host, port) ? 0 : 1;
            }
            Project p = load_project(dir);
            std::vector<std::string> ops;
            if (!op.empty()) ops.push_back(op);
            if (!op_file.empty()) {
                std::istringstream in(read_file(op_file));
                for (std::string line; std::getline(in, line);)
                    if (!line.empty()) ops.push_back(line);
            }
            if (ops.empty()) throw InvalidInput("edit needs --op, --op-file or --serve");
            for (const auto& o : ops) {
                const std::string warning = p.editor.apply(json::parse(o).get<EditOp>());
                if (!warning.empty()) std::cerr << "warning: " << warning << "\n";
            }
            save_project(p);
            std::cout << "revision " << p.editor.revision() << "\n";
            return 0;
        }
        if (report->parsed()) {
            std::optional<Project> p;
            if (!dir.empty()) p = load_project(dir);
            const json r = build_report(p ? &*p : nullptr);
            if (out_file.empty())
                std::cout << r.dump(2) << "\n";
            else
                write_atomic(out_file, r.dump(2) + "\n");
            return 0;
        }
    } catch (const StaleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
