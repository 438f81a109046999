#include "snowframe/runtime/lifecycle.hpp"

namespace snowframe::runtime {

const std::vector<Action>& sleep_actions() {
  static const std::vector<Action> a = {Action::PausePipeline, Action::FlushSinks,
                                        Action::ReleaseSource, Action::PersistTracker};
  return a;
}

const std::vector<Action>& wake_actions() {
  static const std::vector<Action> a = {Action::ReacquireSource, Action::RestoreTracker,
                                        Action::ResumePipeline};
  return a;
}

const std::vector<Action>& shutdown_actions() {
  static const std::vector<Action> a = [] {
    std::vector<Action> v = sleep_actions();
    v.push_back(Action::CloseSinks);
    return v;
  }();
  return a;
}

Transition transition(const EngineState& state, const LifecycleEvent& event) {
  const Transition stay{state, {}, true};
  switch (state.kind) {
    case StateKind::ShuttingDown:
      return stay;
    case StateKind::Faulted:
      if (event.kind == EventKind::ShutdownRequested) {
        return {{StateKind::ShuttingDown, {}}, shutdown_actions(), false};
      }
      return stay;
    default:
      break;
  }
  switch (event.kind) {
    case EventKind::ShutdownRequested:
      return {{StateKind::ShuttingDown, {}}, shutdown_actions(), false};
    case EventKind::FaultRaised:
      return {EngineState::faulted(event.reason), {Action::CleanupBestEffort}, false};
    case EventKind::InitComplete:
      if (state.kind == StateKind::Initializing) {
        return {{StateKind::Running, {}}, {Action::StartSource, Action::StartPipeline}, false};
      }
      return stay;
    case EventKind::SleepRequested:
      if (state.kind == StateKind::Running) return {{StateKind::Sleeping, {}}, sleep_actions(), false};
      return stay;
    case EventKind::WakeRequested:
      if (state.kind == StateKind::Sleeping) return {{StateKind::Running, {}}, wake_actions(), false};
      return stay;
  }
  return stay;
}

std::string_view to_string(StateKind kind) {
  switch (kind) {
    case StateKind::Initializing: return "initializing";
    case StateKind::Running: return "running";
    case StateKind::Sleeping: return "sleeping";
    case StateKind::ShuttingDown: return "shutting_down";
    case StateKind::Faulted: return "faulted";
  }
  return "unknown";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::InitComplete: return "init_complete";
    case EventKind::SleepRequested: return "sleep_requested";
    case EventKind::WakeRequested: return "wake_requested";
    case EventKind::ShutdownRequested: return "shutdown_requested";
    case EventKind::FaultRaised: return "fault_raised";
  }
  return "unknown";
}

std::string_view to_string(Action action) {
  switch (action) {
    case Action::StartSource: return "start_source";
    case Action::StartPipeline: return "start_pipeline";
    case Action::PausePipeline: return "pause_pipeline";
    case Action::FlushSinks: return "flush_sinks";
    case Action::ReleaseSource: return "release_source";
    case Action::PersistTracker: return "persist_tracker";
    case Action::ReacquireSource: return "reacquire_source";
    case Action::RestoreTracker: return "restore_tracker";
    case Action::ResumePipeline: return "resume_pipeline";
    case Action::CloseSinks: return "close_sinks";
    case Action::CleanupBestEffort: return "cleanup_best_effort";
  }
  return "unknown";
}

std::ostream& operator<<(std::ostream& os, StateKind kind) { return os << to_string(kind); }
std::ostream& operator<<(std::ostream& os, EventKind kind) { return os << to_string(kind); }
std::ostream& operator<<(std::ostream& os, Action action) { return os << to_string(action); }

}  // namespace snowframe::runtime
