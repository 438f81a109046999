#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "snowframe/runtime/engine.hpp"

namespace snowframe::control {

enum class Route { GetHealth, Sleep, Wake, GetFrameSnapshot, GetCameraSnapshot, GetConfig };

struct ControlRequest {
  Route route = Route::GetHealth;
  /// Raw Authorization header, if any.
  std::optional<std::string> authorization;
};

struct ControlResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

/// Maps an HTTP method and path to a route. Returns nullopt for unknown paths
/// and for a known path with the wrong method (see route_allows).
std::optional<Route> match_route(std::string_view method, std::string_view path);
/// True if `path` names a route but not for this method (405).
bool path_known(std::string_view path);
std::string_view method_of(Route r);
std::string_view path_of(Route r);
bool is_command(Route r);

/// UTC ISO-8601 with milliseconds, e.g. "2026-01-31T12:00:00.250Z".
std::string iso8601(std::chrono::system_clock::time_point t);

/// HealthReport JSON for a telemetry snapshot.
std::string health_json(const runtime::Telemetry& t, std::string_view config_hash,
                        std::chrono::system_clock::time_point generated_at);

/// SNOWFRAME_CONTROL_TOKEN, unset or empty meaning no token.
std::optional<std::string> token_from_env();

/// Transport-independent request handling. Talks to the engine only through
/// post()/request() and its read-only snapshots.
class ControlService {
 public:
  explicit ControlService(runtime::Engine& engine, std::optional<std::string> token = std::nullopt,
                          std::chrono::milliseconds command_timeout = std::chrono::seconds(10));

  ControlResponse handle(const ControlRequest& request) const;

 private:
  ControlResponse command(runtime::EventKind kind) const;
  ControlResponse snapshot(bool camera) const;

  runtime::Engine& engine_;
  std::optional<std::string> token_;
  std::chrono::milliseconds timeout_;
};

/// HTTP/1.1 front end on a background thread. Serves the control routes and,
/// if `console_dir` exists, static files under /console/.
class ControlServer {
 public:
  ControlServer(const ControlService& service, std::string bind, int port,
                std::filesystem::path console_dir = {});
  ~ControlServer();

  ControlServer(const ControlServer&) = delete;
  ControlServer& operator=(const ControlServer&) = delete;

  /// Binds (port 0 picks a free port) and starts serving. Throws IoError.
  void start();
  void stop();
  int port() const noexcept { return port_; }
  const std::string& bind() const noexcept { return bind_; }

 private:
  struct Impl;
  const ControlService& service_;
  std::string bind_;
  int port_;
  std::filesystem::path console_dir_;
  std::unique_ptr<Impl> impl_;
};

}  // namespace snowframe::control
