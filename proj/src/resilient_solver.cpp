#include "lll/resilient_solver.hpp"

#include <algorithm>
#include <string>

#include "lll/errors.hpp"
#include "lll/probability.hpp"
#include "lll/rng.hpp"

namespace lll {

std::string status_name(EventStatus s) {
  switch (s) {
    case EventStatus::Unsampled: return "unsampled";
    case EventStatus::Fixed: return "fixed";
    case EventStatus::Reverted: return "reverted";
    case EventStatus::Deferred: return "deferred";
  }
  return "unknown";
}

std::vector<EventId> RunState::with_status_before(EventStatus s, std::size_t iteration) const {
  std::vector<EventId> out;
  for (std::size_t a = 0; a < status.size(); ++a) {
    if (status[a] == s && decided_in[a] != 0 && decided_in[a] < iteration) out.push_back(static_cast<EventId>(a));
  }
  return out;
}

namespace {

class DangerTest {
 public:
  DangerTest(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg, std::uint64_t seed)
      : inst_(inst), part_(part), cfg_(cfg), seed_(seed), threshold_(ThresholdConfig::threshold(inst.d(), cfg.c1)) {}

  // Whether A is dangerous given the row-1 conditioning `cond`.
  bool operator()(EventId a, const Assignment& cond, std::size_t iteration) {
    if (inst_.predicate(a).never_satisfiable()) return false;
    std::uint64_t signature = 0;
    for (VarId v : inst_.event(a).vars) {
      signature = mix64(signature ^ (static_cast<std::uint64_t>(v) << 20) ^
                        static_cast<std::uint64_t>(cond[static_cast<std::size_t>(v)] + 1));
    }
    auto opts = estimate_options(cfg_, derive_seed(seed_, signature ^ static_cast<std::uint64_t>(a)));
    // A' contains the event that A itself holds under row 1.
    const auto direct = conditional_event_probability(inst_, a, cond, {}, {}, opts);
    if (direct.exact && direct.value >= threshold_) return true;
    ProbabilityEstimate est;
    try {
      est = a_prime_probability(inst_, a, part_, cond, cfg_, opts);
    } catch (const CapacityError& e) {
      throw CapacityError(std::string(e.what()) + " (event " + std::to_string(a) + ", iteration " +
                          std::to_string(iteration) + ")");
    }
    if (!est.exact) approximate_ = true;
    // Monte Carlo verdicts err towards "dangerous".
    const double margin = est.exact ? 0.0 : 2.0 * std::max(est.std_error(), 0.5 / static_cast<double>(est.samples));
    return est.value + margin >= threshold_;
  }

  bool approximate() const noexcept { return approximate_; }

 private:
  const LllInstance& inst_;
  const Partition& part_;
  const ThresholdConfig& cfg_;
  std::uint64_t seed_;
  double threshold_;
  bool approximate_ = false;
};

// Recomputes the iteration's decisions for `x` from the events within five
// hops of it and compares them with the global outcome.
void check_locality(const LllInstance& inst, const Partition& part, DangerTest& danger, const Assignment& cond,
                    const std::vector<char>& active, const std::vector<EventStatus>& status_before,
                    const std::vector<EventStatus>& status_after, std::size_t i, EventId x) {
  const Graph& g = inst.dep_graph();
  std::vector<NodeId> ball = neighbors_within(g, x, 5);
  ball.push_back(x);
  std::sort(ball.begin(), ball.end());
  auto in_ball = [&](EventId e) { return std::binary_search(ball.begin(), ball.end(), e); };

  Assignment view(cond.size(), -1);
  for (std::size_t v = 0; v < cond.size(); ++v) {
    if (in_ball(inst.owner(static_cast<VarId>(v)))) view[v] = cond[v];
  }
  std::vector<NodeId> near = neighbors_within(g, x, 3);
  near.push_back(x);
  std::vector<char> dangerous(inst.event_count(), 0);
  for (EventId b : near) dangerous[static_cast<std::size_t>(b)] = danger(b, view, i + 1);

  auto reverted_in_view = [&](EventId a) {
    if (!active[static_cast<std::size_t>(a)]) return false;
    if (dangerous[static_cast<std::size_t>(a)]) return true;
    for (NodeId b : g.neighbors(a)) {
      if (dangerous[static_cast<std::size_t>(b)]) return true;
    }
    return false;
  };

  const auto xi = static_cast<std::size_t>(x);
  bool ok = true;
  if (active[xi]) {
    ok = reverted_in_view(x) == (status_after[xi] == EventStatus::Reverted);
  } else if (status_before[xi] == EventStatus::Unsampled && static_cast<std::size_t>(part.assignment[xi]) > i) {
    bool deferred = false;
    for (NodeId b : neighbors_within(g, x, 2)) deferred = deferred || reverted_in_view(b);
    ok = deferred == (status_after[xi] == EventStatus::Deferred);
  }
  if (!ok) {
    throw ContractViolation("locality check failed for event " + std::to_string(x) + " in iteration " +
                            std::to_string(i + 1));
  }
}

}  // namespace

StageResult run_first_stage(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg,
                            std::uint64_t seed, const SolverOptions& opts) {
  cfg.validate();
  if (part.assignment.size() != inst.event_count()) {
    throw InputError("partition covers " + std::to_string(part.assignment.size()) + " events, expected " +
                     std::to_string(inst.event_count()));
  }
  part.validate(inst.event_count());

  const std::size_t n = inst.event_count();
  StageResult result{RunState(inst, derive_seed(seed, "table")), StageReport{}};
  RunState& state = result.state;
  StageReport& report = result.report;
  const Graph& g = inst.dep_graph();
  HopIndex hops(g);
  DangerTest danger(inst, part, cfg, derive_seed(seed, "danger"));

  Assignment cond(inst.variable_count(), -1);
  std::vector<char> dirty(n, 1), dangerous(n, 0), ever_dangerous(n, 0), active(n, 0);
  const auto members = part.members();

  auto set_status = [&](EventId a, EventStatus s, std::size_t iteration) {
    state.status[static_cast<std::size_t>(a)] = s;
    state.decided_in[static_cast<std::size_t>(a)] = iteration;
    state.trace.push_back({a, iteration, s});
  };
  auto touch = [&](VarId v) {
    for (EventId b : inst.events_of(v)) dirty[static_cast<std::size_t>(b)] = 1;
  };

  for (std::size_t i = 0; i < part.part_count; ++i) {
    const std::size_t iteration = i + 1;
    std::fill(active.begin(), active.end(), 0);
    std::vector<EventId> samplers;
    for (NodeId a : members[i]) {
      if (state.status[static_cast<std::size_t>(a)] != EventStatus::Unsampled) continue;
      active[static_cast<std::size_t>(a)] = 1;
      samplers.push_back(a);
      for (VarId v : inst.allocated(a)) {
        cond[static_cast<std::size_t>(v)] = state.table.value(v, 1);
        state.row1_log.emplace_back(v, iteration);
        touch(v);
      }
    }

    for (std::size_t b = 0; b < n; ++b) {
      if (!dirty[b]) continue;
      dangerous[b] = danger(static_cast<EventId>(b), cond, iteration);
      ever_dangerous[b] = ever_dangerous[b] || dangerous[b];
      dirty[b] = 0;
      ++report.danger_tests;
    }

    const std::vector<EventStatus> status_before = opts.check_locality ? state.status : std::vector<EventStatus>{};
    const Assignment cond_before = opts.check_locality ? cond : Assignment{};

    std::vector<EventId> reverted;
    for (EventId a : samplers) {
      bool revert = dangerous[static_cast<std::size_t>(a)] != 0;
      for (NodeId b : g.neighbors(a)) revert = revert || dangerous[static_cast<std::size_t>(b)];
      if (revert) reverted.push_back(a);
      set_status(a, revert ? EventStatus::Reverted : EventStatus::Fixed, iteration);
    }
    for (EventId a : reverted) {
      for (VarId v : inst.allocated(a)) {
        cond[static_cast<std::size_t>(v)] = -1;
        touch(v);
      }
    }
    for (EventId a : reverted) {
      for (NodeId b : hops.two_hop(a)) {
        const auto bi = static_cast<std::size_t>(b);
        if (static_cast<std::size_t>(part.assignment[bi]) > i && state.status[bi] == EventStatus::Unsampled) {
          set_status(b, EventStatus::Deferred, iteration);
        }
      }
    }
    state.rounds += kRoundsPerIteration;
    state.iterations = iteration;

    if (opts.check_locality) {
      for (std::size_t x = 0; x < n; ++x) {
        const bool decided = state.decided_in[x] == iteration;
        const bool could_defer = status_before[x] == EventStatus::Unsampled &&
                                 static_cast<std::size_t>(part.assignment[x]) > i;
        if (decided || could_defer) {
          check_locality(inst, part, danger, cond_before, active, status_before, state.status, i,
                         static_cast<EventId>(x));
        }
      }
    }
  }
  state.rounds += kRoundsOverhead;

  report.rounds_used = state.rounds;
  report.iterations = state.iterations;
  report.fate = state.status;
  report.approximate = danger.approximate();
  for (std::size_t a = 0; a < n; ++a) {
    if (ever_dangerous[a]) report.dangerous_events.push_back(static_cast<EventId>(a));
    switch (state.status[a]) {
      case EventStatus::Fixed: ++report.fixed; break;
      case EventStatus::Reverted: ++report.reverted; break;
      case EventStatus::Deferred: ++report.deferred; break;
      case EventStatus::Unsampled: break;
    }
  }
  return result;
}

ResidualInstance residual_instance(const LllInstance& inst, const RunState& state, const ThresholdConfig& cfg,
                                   StageReport* report) {
  ResidualInstance res;
  res.base = &inst;
  res.conditioning.assign(inst.variable_count(), -1);
  for (std::size_t v = 0; v < inst.variable_count(); ++v) {
    const EventId owner = inst.owner(static_cast<VarId>(v));
    if (state.status[static_cast<std::size_t>(owner)] == EventStatus::Fixed) {
      res.conditioning[v] = state.table.peek(static_cast<VarId>(v), 1);
    } else {
      res.free_vars.push_back(static_cast<VarId>(v));
    }
  }
  std::vector<EventId> satisfied_fixed;
  std::size_t max_unfixed_vars = 0;
  for (std::size_t a = 0; a < inst.event_count(); ++a) {
    std::size_t unfixed = 0;
    for (VarId v : inst.event(static_cast<EventId>(a)).vars) unfixed += res.conditioning[static_cast<std::size_t>(v)] < 0;
    max_unfixed_vars = std::max(max_unfixed_vars, unfixed);
    if (unfixed > 0) {
      res.events.push_back(static_cast<EventId>(a));
    } else if (inst.holds(static_cast<EventId>(a), res.conditioning)) {
      if (cfg.strict) {
        throw ContractViolation("event " + std::to_string(a) + " is satisfied by final first-stage values");
      }
      satisfied_fixed.push_back(static_cast<EventId>(a));
    }
  }
  if (report) {
    report->residual_events = res.events;
    report->satisfied_fixed = std::move(satisfied_fixed);
    report->max_unfixed_vars = max_unfixed_vars;
    std::size_t near_max = 0;
    const Graph& g = inst.dep_graph();
    auto unfinished = [&](NodeId e) {
      const auto s = state.status[static_cast<std::size_t>(e)];
      return s == EventStatus::Reverted || s == EventStatus::Deferred;
    };
    for (std::size_t a = 0; a < inst.event_count(); ++a) {
      std::size_t count = unfinished(static_cast<NodeId>(a));
      for (NodeId b : g.neighbors(static_cast<NodeId>(a))) count += unfinished(b);
      near_max = std::max(near_max, count);
    }
    report->max_unfixed_events_near = near_max;
    report->residual_components.clear();
    for (const auto& job : extract_components(res)) report->residual_components.push_back(job.events.size());
    std::sort(report->residual_components.rbegin(), report->residual_components.rend());
  }
  return res;
}

SolveResult solve(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg, std::uint64_t seed,
                  const SolverOptions& opts) {
  auto stage = run_first_stage(inst, part, cfg, seed, opts);
  SolveResult out;
  out.stage = std::move(stage.report);
  const ResidualInstance residual = residual_instance(inst, stage.state, cfg, &out.stage);
  if (!out.stage.satisfied_fixed.empty()) {
    throw SolveFailure(std::to_string(out.stage.satisfied_fixed.size()) +
                       " events are satisfied by final first-stage values (first: " +
                       std::to_string(out.stage.satisfied_fixed.front()) + ")");
  }
  out.assignment = residual.conditioning;
  out.post = solve_residual(residual, opts.post, derive_seed(seed, "post"), out.assignment);
  const auto check = check_assignment(inst, out.assignment);
  if (!check.valid()) {
    throw ContractViolation("solver produced an assignment satisfying event " +
                            std::to_string(check.violated_events.front()));
  }
  return out;
}

nlohmann::json fate_map_json(const std::vector<EventStatus>& fate) {
  nlohmann::json out = nlohmann::json::array();
  for (auto s : fate) out.push_back(status_name(s));
  return out;
}

nlohmann::json to_json(const StageReport& r) {
  nlohmann::json histogram = nlohmann::json::object();
  std::map<std::size_t, std::size_t> counts;
  for (auto size : r.residual_components) ++counts[size];
  for (const auto& [size, count] : counts) histogram[std::to_string(size)] = count;
  return {{"rounds_used", r.rounds_used},
          {"iterations", r.iterations},
          {"fixed", r.fixed},
          {"reverted", r.reverted},
          {"deferred", r.deferred},
          {"dangerous_events", r.dangerous_events},
          {"residual_events", r.residual_events.size()},
          {"residual_component_histogram", histogram},
          {"max_component", r.residual_components.empty() ? 0 : r.residual_components.front()},
          {"danger_tests", r.danger_tests},
          {"approximate", r.approximate},
          {"satisfied_fixed", r.satisfied_fixed},
          {"max_unfinished_events_near", r.max_unfixed_events_near},
          {"max_unfixed_vars", r.max_unfixed_vars}};
}

}  // namespace lll
