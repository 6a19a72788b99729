#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"

namespace lll {

struct ProbabilityEstimate {
  double value = 0.0;
  bool exact = true;
  std::size_t samples = 0;  // Monte Carlo draws; 0 when exact

  double std_error() const noexcept {
    if (exact || samples == 0) return 0.0;
    return std::sqrt(std::max(value * (1.0 - value), 0.0) / static_cast<double>(samples));
  }
};

struct EstimateOptions {
  std::size_t mc_samples = 4000;
  std::uint64_t seed = 0;
  // Supports up to this many assignments are enumerated exactly.
  std::uint64_t exact_limit = std::uint64_t{1} << 20;
  // Forces Monte Carlo with this many outer draws in a_prime_probability.
  std::optional<std::size_t> outer_samples;
};

EstimateOptions estimate_options(const ThresholdConfig& cfg, std::uint64_t seed);

ProbabilityEstimate event_probability(const LllInstance& inst, EventId a, const EstimateOptions& opts = {});

// Pr[A_S | fixed]: variables allocated to events in `second` take row-2 values,
// the rest take row-1 values. `fixed_row1` is indexed by variable (-1 = free).
// `row2` is empty (all row-2 values drawn fresh) or indexed by variable with
// -1 for cells to draw.
ProbabilityEstimate conditional_event_probability(const LllInstance& inst, EventId a,
                                                  std::span<const int> fixed_row1,
                                                  std::span<const EventId> second,
                                                  std::span<const int> row2 = {},
                                                  const EstimateOptions& opts = {});

// The events whose allocated variables intersect Vars(A), A included. These
// are the only members of S that change A_S.
std::vector<EventId> swap_units(const LllInstance& inst, EventId a);

// Pr over the free row-1 values that some part i and S ⊆ P_i make
// Pr_row2[A_S] >= d^-c3. Throws CapacityError when a part holds more than
// cfg.subset_cap swap units of A.
ProbabilityEstimate a_prime_probability(const LllInstance& inst, EventId a, const Partition& part,
                                        std::span<const int> fixed_row1, const ThresholdConfig& cfg,
                                        const EstimateOptions& opts);

}  // namespace lll
