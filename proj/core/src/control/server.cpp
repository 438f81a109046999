#include <thread>

#include "httplib.h"
#include "snowframe/control/control.hpp"
#include "snowframe/errors.hpp"

namespace snowframe::control {

struct ControlServer::Impl {
  httplib::Server http;
  std::thread thread;
};

ControlServer::ControlServer(const ControlService& service, std::string bind, int port,
                             std::filesystem::path console_dir)
    : service_(service), bind_(std::move(bind)), port_(port), console_dir_(std::move(console_dir)) {}

ControlServer::~ControlServer() { stop(); }

void ControlServer::start() {
  if (impl_) return;
  impl_ = std::make_unique<Impl>();
  auto& http = impl_->http;

  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const auto route = match_route(req.method, req.path);
    if (!route) {
      res.status = path_known(req.path) ? 405 : 404;
      res.set_content(res.status == 405 ? R"({"error":"method not allowed"})" : R"({"error":"not found"})",
                      "application/json");
      return;
    }
    ControlRequest cr{*route, std::nullopt};
    if (req.has_header("Authorization")) cr.authorization = req.get_header_value("Authorization");
    ControlResponse out = service_.handle(cr);
    res.status = out.status;
    res.set_content(std::move(out.body), out.content_type);
    res.set_header("Cache-Control", "no-store");
  };
  for (const char* path : {"/health", "/sleep", "/wake", "/frame.png", "/camera.png", "/config"}) {
    http.Get(path, dispatch);
    http.Post(path, dispatch);
  }

  // SO_REUSEADDR only: a second server on a taken port must fail to bind.
  http.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  });

  std::error_code ec;
  if (!console_dir_.empty() && std::filesystem::is_directory(console_dir_, ec)) {
    http.set_mount_point("/console", console_dir_.string());
    http.Get("/console", [](const httplib::Request&, httplib::Response& res) { res.set_redirect("/console/"); });
  }
  http.set_error_handler([](const httplib::Request&, httplib::Response& res) {
    if (res.body.empty()) res.set_content(R"({"error":"not found"})", "application/json");
  });

  if (port_ == 0) {
    port_ = http.bind_to_any_port(bind_);
    if (port_ < 0) {
      impl_.reset();
      throw IoError("control server could not bind " + bind_);
    }
  } else if (!http.bind_to_port(bind_, port_)) {
    impl_.reset();
    throw IoError("control server could not bind " + bind_ + ":" + std::to_string(port_));
  }
  impl_->thread = std::thread([this] { impl_->http.listen_after_bind(); });
  http.wait_until_ready();
}

void ControlServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
  impl_.reset();
}

}  // namespace snowframe::control
