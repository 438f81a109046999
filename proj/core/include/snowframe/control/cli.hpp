#pragma once

#include <ostream>

namespace snowframe::control {

enum ExitCode : int { kExitOk = 0, kExitFault = 1, kExitUsage = 2 };

/// The kiosk entry point. Prints diagnostics to `err` and, on exit, one line of
/// final health JSON to `out`. Installs SIGINT/SIGTERM handlers while running.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace snowframe::control
