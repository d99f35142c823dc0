#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>

#include "gradecast/service.hpp"

namespace gradecast {

struct ServerOptions {
    std::string host = "0.0.0.0";
    int port = 8080;
    std::optional<std::filesystem::path> static_dir;  // mounted at "/"
};

/// Blocks serving `service` over HTTP until stop_server() is called from
/// another thread. `on_ready` runs once the socket is bound, with the bound
/// port (useful when options.port is 0). Throws InvalidArgument when the
/// port cannot be bound.
void run_server(RiskService& service, const ServerOptions& options, const std::function<void(int)>& on_ready = {});
void stop_server();

}  // namespace gradecast
