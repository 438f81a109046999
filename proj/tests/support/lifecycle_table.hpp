#pragma once

#include <map>
#include <vector>

#include "snowframe/runtime/lifecycle.hpp"

namespace snowframe::testing {

struct Expect {
  runtime::StateKind next;
  std::vector<runtime::Action> actions;
};

// The lifecycle table written out cell by cell.
inline std::map<std::pair<runtime::StateKind, runtime::EventKind>, Expect> expected_table() {
  using S = runtime::StateKind;
  using E = runtime::EventKind;
  using A = runtime::Action;
  using runtime::kAllEvents;
  const std::vector<A> sleep = {A::PausePipeline, A::FlushSinks, A::ReleaseSource, A::PersistTracker};
  const std::vector<A> wake = {A::ReacquireSource, A::RestoreTracker, A::ResumePipeline};
  const std::vector<A> shut = {A::PausePipeline, A::FlushSinks, A::ReleaseSource, A::PersistTracker,
                               A::CloseSinks};
  const std::vector<A> fault = {A::CleanupBestEffort};
  std::map<std::pair<S, E>, Expect> t;
  t[{S::Initializing, E::InitComplete}] = {S::Running, {A::StartSource, A::StartPipeline}};
  t[{S::Initializing, E::SleepRequested}] = {S::Initializing, {}};
  t[{S::Initializing, E::WakeRequested}] = {S::Initializing, {}};
  t[{S::Initializing, E::ShutdownRequested}] = {S::ShuttingDown, shut};
  t[{S::Initializing, E::FaultRaised}] = {S::Faulted, fault};
  t[{S::Running, E::InitComplete}] = {S::Running, {}};
  t[{S::Running, E::SleepRequested}] = {S::Sleeping, sleep};
  t[{S::Running, E::WakeRequested}] = {S::Running, {}};
  t[{S::Running, E::ShutdownRequested}] = {S::ShuttingDown, shut};
  t[{S::Running, E::FaultRaised}] = {S::Faulted, fault};
  t[{S::Sleeping, E::InitComplete}] = {S::Sleeping, {}};
  t[{S::Sleeping, E::SleepRequested}] = {S::Sleeping, {}};
  t[{S::Sleeping, E::WakeRequested}] = {S::Running, wake};
  t[{S::Sleeping, E::ShutdownRequested}] = {S::ShuttingDown, shut};
  t[{S::Sleeping, E::FaultRaised}] = {S::Faulted, fault};
  for (E e : kAllEvents) t[{S::ShuttingDown, e}] = {S::ShuttingDown, {}};
  for (E e : kAllEvents) t[{S::Faulted, e}] = {S::Faulted, {}};
  t[{S::Faulted, E::ShutdownRequested}] = {S::ShuttingDown, shut};
  return t;
}

}  // namespace snowframe::testing
