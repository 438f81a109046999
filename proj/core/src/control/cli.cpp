#include "snowframe/control/cli.hpp"

#include <atomic>
#include <csignal>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "snowframe/control/control.hpp"
#include "snowframe/errors.hpp"
#include "snowframe/version.hpp"

namespace snowframe::control {

namespace {

std::atomic<runtime::Engine*> g_engine{nullptr};

extern "C" void on_signal(int) {
  if (auto* e = g_engine.load()) e->request_stop();
}

struct SignalScope {
  explicit SignalScope(runtime::Engine& e) {
    g_engine.store(&e);
    old_int = std::signal(SIGINT, on_signal);
    old_term = std::signal(SIGTERM, on_signal);
  }
  ~SignalScope() {
    std::signal(SIGINT, old_int);
    std::signal(SIGTERM, old_term);
    g_engine.store(nullptr);
  }
  void (*old_int)(int);
  void (*old_term)(int);
};

struct Overrides {
  std::string config;
  std::optional<std::string> source, sink, cascade, mode, clock;
  std::optional<std::uint64_t> seed, frames;
  std::optional<int> control_port;
  bool headless = false;
};

void apply(const Overrides& o, runtime::EngineConfig& c) {
  if (o.mode) c.mode = runtime::parse_mode(*o.mode);
  if (o.source) c.source.spec = *o.source;
  if (o.sink) c.sink.spec = *o.sink;
  if (o.cascade) c.cascade = *o.cascade;
  if (o.seed) c.seed = *o.seed;
  if (o.clock) c.pipeline.clock = runtime::parse_clock(*o.clock);
  if (o.control_port) {
    c.control.port = *o.control_port;
    if (!c.control.enabled) c.control.enabled = true;
  }
  if (o.headless) {
    if (o.sink && *o.sink == "window") throw ConfigError("--headless cannot be combined with --sink window");
    if (c.sink.spec == "window") c.sink.spec = "null";
  }
  runtime::validate(c);
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"snowframe: live face sprites over a snowy scene", "snowframe"};
  app.set_version_flag("--version", std::string(version()));
  Overrides o;
  app.add_option("--config", o.config, "Engine config file (JSON)")->required();
  app.add_option("--source", o.source, "synthetic | dir:PATH | camera[:DEVICE] | null");
  app.add_option("--sink", o.sink, "window | dir:PATH | null");
  app.add_option("--cascade", o.cascade, "Cascade XML file");
  app.add_option("--seed", o.seed, "Snowfall and synthetic source seed");
  app.add_option("--mode", o.mode, "exhibition | home")->check(CLI::IsMember({"exhibition", "home"}));
  app.add_option("--control-port", o.control_port, "Control API port (0 picks a free port); enables the API")
      ->check(CLI::Range(0, 65535));
  app.add_flag("--headless", o.headless, "No window; a window sink becomes null");
  app.add_option("--frames", o.frames, "Shut down after this many composed frames");
  app.add_option("--clock", o.clock, "realtime | simulated")->check(CLI::IsMember({"realtime", "simulated"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  runtime::EngineConfig config;
  std::optional<runtime::Engine> engine;
  runtime::EngineOptions options;
  try {
    config = runtime::load_config(o.config);
    apply(o, config);
    options.frame_limit = o.frames;
    options.exit_on_fault = !config.control_enabled();
    engine.emplace(config, runtime::make_components(config), options);
  } catch (const Error& e) {
    err << "snowframe: " << e.what() << "\n";
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const IoError*>(&e) ||
        dynamic_cast<const ParseError*>(&e)) {
      err << "Run with --help for more information.\n";
      return kExitUsage;
    }
    return kExitFault;
  }

  std::optional<ControlService> service;
  std::optional<ControlServer> server;
  if (config.control_enabled()) {
    service.emplace(*engine, token_from_env());
    server.emplace(*service, config.control.bind, config.control.port, config.control.console_dir);
    try {
      server->start();
    } catch (const Error& e) {
      err << "snowframe: " << e.what() << "\n";
      return kExitFault;
    }
    err << "snowframe: control API on http://" << server->bind() << ":" << server->port() << "/health\n";
  }

  int code;
  {
    SignalScope signals(*engine);
    code = engine->run();
  }
  if (server) server->stop();

  const runtime::Telemetry t = engine->telemetry();
  out << health_json(t, engine->config_hash(), std::chrono::system_clock::now()) << std::endl;
  if (code != 0) {
    err << "snowframe: fault: " << engine->first_fault().value_or("engine faulted") << "\n";
    return kExitFault;
  }
  return kExitOk;
}

}  // namespace snowframe::control
