#pragma once

#include "inkbot/pipeline/project.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

namespace inkbot {

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";

    nlohmann::json json() const { return nlohmann::json::parse(body); }
};

/// Transport-independent request handling. Projects live in
/// `root/<id>/`; mutations of one project are serialized, different
/// projects proceed in parallel.
class ApiService {
public:
    explicit ApiService(std::filesystem::path root, std::filesystem::path ui_dir = {});

    ApiResponse handle(const std::string& method, const std::string& path, const std::string& body = {});

    /// Documented routes with their request and response shapes.
    static nlohmann::json route_table();

private:
    struct Entry {
        std::mutex mu;
        Project project;
    };
    std::shared_ptr<Entry> entry(const std::string& id);
    ApiResponse create(const nlohmann::json& body);
    ApiResponse project_route(const std::string& method, const std::vector<std::string>& parts, const std::string& body);
    ApiResponse static_file(const std::string& path) const;

    std::filesystem::path root_;
    std::filesystem::path ui_dir_;
    std::mutex map_mu_;
    std::map<std::string, std::shared_ptr<Entry>> projects_;
};

/// HTTP front end over an ApiService.
class HttpServer {
public:
    explicit HttpServer(ApiService& api);
    ~HttpServer();

    /// Binds (port 0 picks a free port) and serves on a background thread.
    int start(const std::string& host = "127.0.0.1", int port = 0);
    /// Binds and serves on the calling thread until stop().
    bool listen(const std::string& host, int port);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace inkbot
