#include "gradecast/server.hpp"

#include <mutex>

#include <httplib.h>

#include "gradecast/error.hpp"

namespace gradecast {

namespace {

std::mutex g_mutex;
httplib::Server* g_server = nullptr;

void route(RiskService& service, const httplib::Request& req, httplib::Response& res) {
    const auto out = service.handle(req.method, req.path, req.body, req.get_header_value("Authorization"));
    res.status = out.status;
    res.set_content(out.body.dump(), "application/json");
}

}  // namespace

void run_server(RiskService& service, const ServerOptions& options, const std::function<void(int)>& on_ready) {
    httplib::Server server;
    const auto handler = [&service](const httplib::Request& req, httplib::Response& res) { route(service, req, res); };
    server.Get("/api/.*", handler);
    server.Put("/api/.*", handler);
    server.Post("/api/.*", handler);
    server.Delete("/api/.*", handler);
    if (options.static_dir && !server.set_mount_point("/", options.static_dir->string()))
        throw gradecast::Error(ErrorCode::FileUnreadable, "cannot serve static files from " + options.static_dir->string());

    int port = options.port;
    if (port == 0) {
        port = server.bind_to_any_port(options.host);
    } else if (!server.bind_to_port(options.host, port)) {
        port = -1;
    }
    if (port < 0) throw gradecast::Error(ErrorCode::InvalidArgument, "cannot bind " + options.host + ":" + std::to_string(options.port));
    {
        std::lock_guard lock(g_mutex);
        g_server = &server;
    }
    if (on_ready) on_ready(port);
    server.listen_after_bind();
    std::lock_guard lock(g_mutex);
    g_server = nullptr;
}

void stop_server() {
    std::lock_guard lock(g_mutex);
    if (g_server) g_server->stop();
}

}  // namespace gradecast
