#pragma once

#include <array>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace snowframe::runtime {

enum class StateKind { Initializing, Running, Sleeping, ShuttingDown, Faulted };

inline constexpr std::array<StateKind, 5> kAllStates = {
    StateKind::Initializing, StateKind::Running, StateKind::Sleeping, StateKind::ShuttingDown,
    StateKind::Faulted};

struct EngineState {
  StateKind kind = StateKind::Initializing;
  std::string fault_reason;  // only set when Faulted

  static EngineState faulted(std::string reason) { return {StateKind::Faulted, std::move(reason)}; }

  friend bool operator==(const EngineState&, const EngineState&) = default;
};

enum class EventKind { InitComplete, SleepRequested, WakeRequested, ShutdownRequested, FaultRaised };

inline constexpr std::array<EventKind, 5> kAllEvents = {
    EventKind::InitComplete, EventKind::SleepRequested, EventKind::WakeRequested,
    EventKind::ShutdownRequested, EventKind::FaultRaised};

struct LifecycleEvent {
  EventKind kind = EventKind::InitComplete;
  std::string reason;  // only meaningful for FaultRaised

  static LifecycleEvent fault(std::string reason) { return {EventKind::FaultRaised, std::move(reason)}; }

  friend bool operator==(const LifecycleEvent&, const LifecycleEvent&) = default;
};

enum class Action {
  StartSource,
  StartPipeline,
  PausePipeline,
  FlushSinks,
  ReleaseSource,
  PersistTracker,
  ReacquireSource,
  RestoreTracker,
  ResumePipeline,
  CloseSinks,
  CleanupBestEffort,
};

struct Transition {
  EngineState next;
  std::vector<Action> actions;
  bool noop = false;  // state unchanged and nothing to do
};

/// The lifecycle table. Total over (state, event); unlisted pairs are no-ops.
Transition transition(const EngineState& state, const LifecycleEvent& event);

/// Actions that put a running engine to sleep, in order.
const std::vector<Action>& sleep_actions();
const std::vector<Action>& wake_actions();
const std::vector<Action>& shutdown_actions();

/// Lower-case wire names: "running", "sleep_requested", "pause_pipeline"...
std::string_view to_string(StateKind kind);
std::string_view to_string(EventKind kind);
std::string_view to_string(Action action);

std::ostream& operator<<(std::ostream& os, StateKind kind);
std::ostream& operator<<(std::ostream& os, EventKind kind);
std::ostream& operator<<(std::ostream& os, Action action);

}  // namespace snowframe::runtime
