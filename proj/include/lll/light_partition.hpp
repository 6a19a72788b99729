#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"
#include "lll/resilient_solver.hpp"

namespace lll {

// log2(Δ) for Δ >= 2, else 0.
double log2_degree(std::size_t max_degree);

// ⌈Δ / log2 Δ⌉ base parts of the log Δ-light partition.
std::size_t light_part_count(std::size_t max_degree);

// One variable part(v) per vertex, uniform over light_part_count(Δ) values and
// allocated to the vertex's event. The event of v depends on part(v) and the
// part variables of N(v) and holds when some part receives at least
// defect_const * log2 Δ neighbours of v. Requires Δ >= 4.
LllInstance build_light_partition_instance(const Graph& g, double defect_const);

// Sizes of `groups` contiguous groups over `items` items, differing by at
// most one, larger groups first.
std::vector<std::size_t> balanced_group_sizes(std::size_t items, std::size_t groups);

// Maps base part p to the index of the contiguous group containing it.
Partition group_parts(const Partition& base, std::size_t groups);

struct LightPartitionResult {
  Partition partition;
  std::size_t base_parts = 1;
  std::size_t max_group_size = 1;
  // Guaranteed per-part neighbour bound: (count threshold - 1) * max_group_size,
  // or Δ when the short-circuit applies.
  double per_part_bound = 0.0;
  bool short_circuit = false;
  std::optional<SolveResult> solve;
};

// x-light partition with ⌈Δ/x⌉ parts. Requires x >= log2 Δ. Graphs with
// Δ < 4, or x large enough for a single part, get the single-part partition.
LightPartitionResult compute_light_partition(const Graph& g, double x, const ThresholdConfig& cfg, std::uint64_t seed,
                                             const SolverOptions& opts = {});

// Same with the target part count given directly (1 <= parts <= base parts).
LightPartitionResult compute_light_partition_parts(const Graph& g, std::size_t parts, const ThresholdConfig& cfg,
                                                   std::uint64_t seed, const SolverOptions& opts = {});

struct ResilienceCheck {
  double a_star_threshold = 0.0;  // neighbours in one part that trigger A*
  std::size_t trials = 0;
  std::vector<double> estimate;    // per event
  std::vector<double> bound;       // per event Chernoff bound (parts * e^(3μ - t*))
  std::vector<char> pass;
  bool all_pass() const;
  double max_estimate() const;
};

// Monte Carlo check of the light-partition instance's A* events against the
// Chernoff envelope, with a 3σ allowance.
ResilienceCheck verify_resilience_1part(const LllInstance& inst, const ThresholdConfig& cfg, std::size_t trials,
                                        std::uint64_t seed);

nlohmann::json partition_json(const Partition& p);

}  // namespace lll
