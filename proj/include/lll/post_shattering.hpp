#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/instance.hpp"

namespace lll {

// Events left with at least one free variable after the first stage, read
// against the base instance with the final row-1 values as conditioning.
struct ResidualInstance {
  const LllInstance* base = nullptr;
  Assignment conditioning;          // final row-1 values, -1 for free variables
  std::vector<EventId> events;      // ascending
  std::vector<VarId> free_vars;     // ascending

  bool empty() const noexcept { return events.empty(); }
};

struct ComponentJob {
  std::vector<EventId> events;                     // ascending, connected through free variables
  std::vector<VarId> free_vars;                    // ascending
  std::vector<std::pair<VarId, int>> conditioning; // fixed boundary values read by the events
};

enum class ComponentMethod { Exhaustive, MoserTardos };

struct ComponentStats {
  std::size_t events = 0;
  std::size_t free_vars = 0;
  ComponentMethod method = ComponentMethod::Exhaustive;
  std::size_t resamplings = 0;
  // e * p' * (d' + 1) over the conditioned component, or -1 when p' was not computable exactly.
  double criterion = -1.0;
  std::vector<EventId> resampled;  // MT resampling log, in order
};

struct PostShatterOptions {
  std::uint64_t exhaustive_limit = std::uint64_t{1} << 16;
  std::size_t resample_factor = 100;  // cap = factor * |component| event resamplings
  bool compute_criterion = true;
};

struct ComponentSolution {
  std::vector<std::pair<VarId, int>> values;
  ComponentStats stats;
};

std::vector<ComponentJob> extract_components(const ResidualInstance& residual);

// Throws SolveFailure when the resample cap is exceeded or exhaustive search
// proves the component unsatisfiable.
ComponentSolution solve_component(const LllInstance& inst, const ComponentJob& job, const PostShatterOptions& opts,
                                  std::uint64_t seed);

struct PostShatterReport {
  std::vector<ComponentStats> components;
  std::size_t max_component() const;
  std::size_t total_resamplings() const;
};

// Solves every component (per-job seed = derive_seed(seed, min event id)) and
// writes the values into `assignment`.
PostShatterReport solve_residual(const ResidualInstance& residual, const PostShatterOptions& opts, std::uint64_t seed,
                                 Assignment& assignment);

nlohmann::json to_json(const PostShatterReport& report);
std::string method_name(ComponentMethod m);

}  // namespace lll
