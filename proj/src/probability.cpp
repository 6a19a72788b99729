#include "lll/probability.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

#include "lll/errors.hpp"
#include "lll/rng.hpp"

namespace lll {

namespace {

// An event's local positions, each fixed to a value or free (-1) and drawn
// from its variable's distribution.
struct LocalSpace {
  const CompiledPredicate* pred = nullptr;
  std::vector<const std::vector<double>*> weights;
  std::vector<int> values;
};

LocalSpace local_space(const LllInstance& inst, EventId a) {
  LocalSpace space;
  space.pred = &inst.predicate(a);
  const auto& ev = inst.event(a);
  space.weights.reserve(ev.vars.size());
  for (VarId v : ev.vars) space.weights.push_back(&inst.variable(v).weights);
  space.values.assign(ev.vars.size(), -1);
  return space;
}

std::uint64_t free_support(const LocalSpace& space) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < space.values.size(); ++i) {
    if (space.values[i] >= 0) continue;
    const auto dom = static_cast<std::uint64_t>(space.weights[i]->size());
    if (total > cap / dom) return cap;
    total *= dom;
  }
  return total;
}

double enumerate_rec(const LocalSpace& space, std::vector<int>& local, const std::vector<int>& free_pos,
                     std::size_t depth) {
  if (depth == free_pos.size()) return space.pred->evaluate(local) ? 1.0 : 0.0;
  const int pos = free_pos[depth];
  const auto& w = *space.weights[static_cast<std::size_t>(pos)];
  double total = 0.0;
  for (std::size_t value = 0; value < w.size(); ++value) {
    if (w[value] <= 0.0) continue;
    local[static_cast<std::size_t>(pos)] = static_cast<int>(value);
    total += w[value] * enumerate_rec(space, local, free_pos, depth + 1);
  }
  local[static_cast<std::size_t>(pos)] = -1;
  return total;
}

double exact_probability(const LocalSpace& space) {
  std::vector<int> free_pos;
  for (std::size_t i = 0; i < space.values.size(); ++i) {
    if (space.values[i] < 0) free_pos.push_back(static_cast<int>(i));
  }
  std::vector<int> local = space.values;
  return std::clamp(enumerate_rec(space, local, free_pos, 0), 0.0, 1.0);
}

ProbabilityEstimate estimate(const LocalSpace& space, std::size_t samples, std::uint64_t exact_limit,
                             std::uint64_t seed) {
  if (free_support(space) <= exact_limit) return {exact_probability(space), true, 0};
  Rng rng(seed);
  std::vector<int> local = space.values;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < local.size(); ++i) {
      if (space.values[i] < 0) local[i] = rng.draw(*space.weights[i]);
    }
    hits += space.pred->evaluate(local);
  }
  return {static_cast<double>(hits) / static_cast<double>(samples), false, samples};
}

void check_partial(const LllInstance& inst, std::span<const int> values, const char* what) {
  if (values.size() != inst.variable_count()) {
    throw InputError(std::string(what) + " has " + std::to_string(values.size()) + " entries, expected " +
                     std::to_string(inst.variable_count()));
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    if (values[v] >= inst.variables()[v].domain_size) {
      throw InputError(std::string(what) + " value of variable " + std::to_string(v) + " outside its domain");
    }
  }
}

}  // namespace

EstimateOptions estimate_options(const ThresholdConfig& cfg, std::uint64_t seed) {
  EstimateOptions opts;
  opts.mc_samples = cfg.mc_samples;
  opts.seed = seed;
  return opts;
}

ProbabilityEstimate event_probability(const LllInstance& inst, EventId a, const EstimateOptions& opts) {
  return estimate(local_space(inst, a), opts.mc_samples, opts.exact_limit,
                  derive_seed(opts.seed, static_cast<std::uint64_t>(a)));
}

ProbabilityEstimate conditional_event_probability(const LllInstance& inst, EventId a,
                                                  std::span<const int> fixed_row1,
                                                  std::span<const EventId> second, std::span<const int> row2,
                                                  const EstimateOptions& opts) {
  check_partial(inst, fixed_row1, "fixed assignment");
  if (!row2.empty()) check_partial(inst, row2, "row-2 assignment");
  std::vector<EventId> swapped(second.begin(), second.end());
  std::sort(swapped.begin(), swapped.end());
  LocalSpace space = local_space(inst, a);
  const auto& vars = inst.event(a).vars;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const auto v = static_cast<std::size_t>(vars[i]);
    if (std::binary_search(swapped.begin(), swapped.end(), inst.owner(vars[i]))) {
      space.values[i] = row2.empty() ? -1 : row2[v];
    } else {
      space.values[i] = fixed_row1[v];
    }
  }
  return estimate(space, opts.mc_samples, opts.exact_limit, derive_seed(opts.seed, static_cast<std::uint64_t>(a)));
}

std::vector<EventId> swap_units(const LllInstance& inst, EventId a) {
  std::vector<EventId> units;
  for (VarId v : inst.event(a).vars) units.push_back(inst.owner(v));
  std::sort(units.begin(), units.end());
  units.erase(std::unique(units.begin(), units.end()), units.end());
  return units;
}

ProbabilityEstimate a_prime_probability(const LllInstance& inst, EventId a, const Partition& part,
                                        std::span<const int> fixed_row1, const ThresholdConfig& cfg,
                                        const EstimateOptions& opts) {
  check_partial(inst, fixed_row1, "fixed assignment");
  if (part.assignment.size() != inst.event_count()) {
    throw InputError("partition covers " + std::to_string(part.assignment.size()) + " events, expected " +
                     std::to_string(inst.event_count()));
  }
  const LocalSpace base = local_space(inst, a);
  if (base.pred->never_satisfiable()) return {0.0, true, 0};

  const double inner_threshold = ThresholdConfig::threshold(inst.d(), cfg.c3);
  const auto& vars = inst.event(a).vars;

  // Swap units grouped by part; each unit carries the local positions it owns.
  struct Unit {
    std::vector<int> positions;
  };
  std::vector<std::vector<Unit>> groups;
  {
    std::vector<EventId> units = swap_units(inst, a);
    std::vector<int> group_of_part(part.part_count, -1);
    for (EventId u : units) {
      const auto p = static_cast<std::size_t>(part.assignment[static_cast<std::size_t>(u)]);
      if (group_of_part[p] < 0) {
        group_of_part[p] = static_cast<int>(groups.size());
        groups.emplace_back();
      }
      Unit unit;
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (inst.owner(vars[i]) == u) unit.positions.push_back(static_cast<int>(i));
      }
      groups[static_cast<std::size_t>(group_of_part[p])].push_back(std::move(unit));
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (groups[g].size() > cfg.subset_cap) {
        throw CapacityError("event " + std::to_string(a) + " has " + std::to_string(groups[g].size()) +
                            " swap units in one part, above subset_cap " + std::to_string(cfg.subset_cap));
      }
    }
  }

  LocalSpace outer = base;
  for (std::size_t i = 0; i < vars.size(); ++i) outer.values[i] = fixed_row1[static_cast<std::size_t>(vars[i])];
  std::vector<int> free_pos;
  for (std::size_t i = 0; i < outer.values.size(); ++i) {
    if (outer.values[i] < 0) free_pos.push_back(static_cast<int>(i));
  }
  const bool memo_ok = free_support(outer) < (std::uint64_t{1} << 62);

  // Pr_row2[A_S] depends on row 1 only through the positions outside S, so
  // inner results are memoised per (part, S, row-1 values outside S).
  std::vector<std::vector<std::unordered_map<std::uint64_t, ProbabilityEstimate>>> memo(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) memo[g].resize(std::size_t{1} << groups[g].size());

  bool all_exact = true;
  LocalSpace inner = base;
  std::vector<char> swapped(vars.size(), 0);
  auto a_prime_holds = [&](const std::vector<int>& row1) {
    if (base.pred->evaluate(row1)) return true;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const auto& group = groups[g];
      const std::size_t subsets = std::size_t{1} << group.size();
      for (std::size_t mask = 1; mask < subsets; ++mask) {
        std::fill(swapped.begin(), swapped.end(), 0);
        for (std::size_t u = 0; u < group.size(); ++u) {
          if (!(mask >> u & 1U)) continue;
          for (int pos : group[u].positions) swapped[static_cast<std::size_t>(pos)] = 1;
        }
        std::uint64_t key = 0;
        for (int pos : free_pos) {
          if (swapped[static_cast<std::size_t>(pos)]) continue;
          key = key * outer.weights[static_cast<std::size_t>(pos)]->size() + static_cast<std::uint64_t>(row1[static_cast<std::size_t>(pos)]);
        }
        auto& table = memo[g][mask];
        auto it = memo_ok ? table.find(key) : table.end();
        ProbabilityEstimate est;
        if (it != table.end()) {
          est = it->second;
        } else {
          inner.values = row1;
          for (std::size_t i = 0; i < vars.size(); ++i) {
            if (swapped[i]) inner.values[i] = -1;
          }
          est = estimate(inner, opts.mc_samples, opts.exact_limit,
                         derive_seed(derive_seed(opts.seed ^ 0x5bd1e995ULL, (g << 32) | mask), key));
          if (memo_ok) table.emplace(key, est);
        }
        all_exact = all_exact && est.exact;
        if (est.value >= inner_threshold) return true;
      }
    }
    return false;
  };

  const std::size_t outer_budget = opts.outer_samples.value_or(opts.mc_samples);
  if (!opts.outer_samples && free_support(outer) <= outer_budget) {
    // Weighted enumeration of the free row-1 values.
    std::vector<int> row1 = outer.values;
    double total = 0.0;
    auto rec = [&](auto&& self, std::size_t depth, double weight) -> void {
      if (depth == free_pos.size()) {
        if (a_prime_holds(row1)) total += weight;
        return;
      }
      const auto pos = static_cast<std::size_t>(free_pos[depth]);
      const auto& w = *outer.weights[pos];
      for (std::size_t value = 0; value < w.size(); ++value) {
        if (w[value] <= 0.0) continue;
        row1[pos] = static_cast<int>(value);
        self(self, depth + 1, weight * w[value]);
      }
    };
    rec(rec, 0, 1.0);
    ProbabilityEstimate out{std::clamp(total, 0.0, 1.0), all_exact, 0};
    return out;
  }

  Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(a)));
  std::vector<int> row1 = outer.values;
  std::size_t hits = 0;
  for (std::size_t s = 0; s < outer_budget; ++s) {
    for (int pos : free_pos) row1[static_cast<std::size_t>(pos)] = rng.draw(*outer.weights[static_cast<std::size_t>(pos)]);
    hits += a_prime_holds(row1);
  }
  return {static_cast<double>(hits) / static_cast<double>(outer_budget), false, outer_budget};
}

}  // namespace lll
