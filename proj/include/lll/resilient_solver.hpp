#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"
#include "lll/post_shattering.hpp"
#include "lll/randomness_table.hpp"

namespace lll {

enum class EventStatus : std::uint8_t { Unsampled, Fixed, Reverted, Deferred };

std::string status_name(EventStatus s);

// Rounds charged per iteration: sample, share values, dangerous flags, revert
// flags, and the radius-2 deferral broadcast folded into one step.
inline constexpr std::size_t kRoundsPerIteration = 5;
// Setup (degree discovery) and the closing residual announcement.
inline constexpr std::size_t kRoundsOverhead = 2;

struct StatusTransition {
  EventId event = 0;
  std::size_t iteration = 0;  // 1-based
  EventStatus to = EventStatus::Unsampled;
};

struct RunState {
  explicit RunState(const LllInstance& inst, std::uint64_t seed)
      : status(inst.event_count(), EventStatus::Unsampled), decided_in(inst.event_count(), 0), table(inst, seed) {}

  std::vector<EventStatus> status;
  std::vector<std::size_t> decided_in;  // iteration that set the terminal status, 0 if none
  RandomnessTable table;
  std::size_t rounds = 0;
  std::size_t iterations = 0;
  std::vector<StatusTransition> trace;
  // (variable, iteration) for every row-1 cell materialised by the stage.
  std::vector<std::pair<VarId, std::size_t>> row1_log;

  // F_i, R_i, D_i: events holding the status at the start of iteration i (1-based).
  std::vector<EventId> with_status_before(EventStatus s, std::size_t iteration) const;
};

struct StageReport {
  std::size_t rounds_used = 0;
  std::size_t iterations = 0;
  std::vector<EventId> dangerous_events;  // flagged dangerous in some iteration
  std::vector<EventId> residual_events;
  std::vector<std::size_t> residual_components;  // component sizes, descending
  std::vector<EventStatus> fate;
  std::size_t fixed = 0, reverted = 0, deferred = 0;
  std::size_t danger_tests = 0;
  bool approximate = false;  // some danger test used Monte Carlo
  // Events with every variable final that are nonetheless satisfied.
  std::vector<EventId> satisfied_fixed;
  // Largest number of reverted-or-deferred events within one hop of an event,
  // and largest number of unfixed variables in one Vars(A).
  std::size_t max_unfixed_events_near = 0;
  std::size_t max_unfixed_vars = 0;
};

struct SolverOptions {
  PostShatterOptions post;
  // Re-derive every decision from the deciding event's radius-5 view and
  // throw ContractViolation on any disagreement.
  bool check_locality = false;
};

struct StageResult {
  RunState state;
  StageReport report;
};

// Algorithm of the first stage; parts are processed in index order.
StageResult run_first_stage(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg,
                            std::uint64_t seed, const SolverOptions& opts = {});

// Residual over the variables not allocated to fixed events, conditioned on
// the fixed events' row-1 values. Fully fixed events that hold raise
// ContractViolation in strict mode and are listed in report.satisfied_fixed
// otherwise.
ResidualInstance residual_instance(const LllInstance& inst, const RunState& state, const ThresholdConfig& cfg,
                                   StageReport* report = nullptr);

struct SolveResult {
  Assignment assignment;
  StageReport stage;
  PostShatterReport post;
};

// First stage plus post-shattering. Throws SolveFailure when a component
// cannot be solved; never returns an assignment that fails check_assignment.
SolveResult solve(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg, std::uint64_t seed,
                  const SolverOptions& opts = {});

nlohmann::json to_json(const StageReport& report);
nlohmann::json fate_map_json(const std::vector<EventStatus>& fate);

}  // namespace lll
