#ifndef REPLAN_EVAL_COUNTERS_HPP
#define REPLAN_EVAL_COUNTERS_HPP

#include <atomic>
#include <cstdint>

namespace replan {

/// Process-wide instrumentation counters. Grid-backed replanning must not
/// touch the dynamics, the cost, or the optimizer; tests snapshot these
/// around a replan call to prove it.
struct EvalCounters {
  static std::atomic<std::uint64_t> dynamics_calls;
  static std::atomic<std::uint64_t> cost_calls;
  static std::atomic<std::uint64_t> optimizer_runs;

  struct Snapshot {
    std::uint64_t dynamics, cost, optimizer;
  };

  static Snapshot snapshot() {
    return {dynamics_calls.load(), cost_calls.load(), optimizer_runs.load()};
  }

  static Snapshot delta(const Snapshot& before) {
    auto now = snapshot();
    return {now.dynamics - before.dynamics, now.cost - before.cost,
            now.optimizer - before.optimizer};
  }
};

}  // namespace replan

#endif  // REPLAN_EVAL_COUNTERS_HPP
