#include "lll/light_partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lll/errors.hpp"
#include "lll/rng.hpp"

namespace lll {

double log2_degree(std::size_t max_degree) {
  return max_degree >= 2 ? std::log2(static_cast<double>(max_degree)) : 0.0;
}

std::size_t light_part_count(std::size_t max_degree) {
  if (max_degree < 2) return 1;
  return static_cast<std::size_t>(std::ceil(static_cast<double>(max_degree) / log2_degree(max_degree) - 1e-12));
}

LllInstance build_light_partition_instance(const Graph& g, double defect_const) {
  const std::size_t delta = g.max_degree();
  if (delta < 4) throw InputError("light-partition instance needs max degree >= 4");
  const auto parts = static_cast<int>(light_part_count(delta));
  const double threshold = defect_const * log2_degree(delta);
  std::vector<VariableSpec> vars;
  std::vector<EventSpec> events;
  vars.reserve(g.node_count());
  events.reserve(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    vars.push_back(VariableSpec::uniform(static_cast<VarId>(v), parts));
    EventSpec ev;
    ev.id = static_cast<EventId>(v);
    ev.vars.push_back(static_cast<VarId>(v));
    MaxPartLoad load;
    load.threshold = threshold;
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
      ev.vars.push_back(u);
      load.vars.push_back(u);
    }
    ev.predicate = std::move(load);
    events.push_back(std::move(ev));
  }
  Allocation alloc;
  alloc.owner.resize(g.node_count());
  for (std::size_t v = 0; v < g.node_count(); ++v) alloc.owner[v] = static_cast<EventId>(v);
  return build_instance(std::move(vars), std::move(events), std::move(alloc));
}

std::vector<std::size_t> balanced_group_sizes(std::size_t items, std::size_t groups) {
  if (groups == 0) throw InputError("cannot split into zero groups");
  std::vector<std::size_t> sizes(groups, items / groups);
  for (std::size_t i = 0; i < items % groups; ++i) ++sizes[i];
  return sizes;
}

Partition group_parts(const Partition& base, std::size_t groups) {
  if (groups > base.part_count) {
    throw InputError("cannot group " + std::to_string(base.part_count) + " parts into " + std::to_string(groups));
  }
  const auto sizes = balanced_group_sizes(base.part_count, groups);
  std::vector<std::int32_t> group_of(base.part_count);
  std::size_t p = 0;
  for (std::size_t gi = 0; gi < groups; ++gi) {
    for (std::size_t k = 0; k < sizes[gi]; ++k) group_of[p++] = static_cast<std::int32_t>(gi);
  }
  Partition out{groups, {}};
  out.assignment.reserve(base.assignment.size());
  for (auto a : base.assignment) out.assignment.push_back(group_of[static_cast<std::size_t>(a)]);
  return out;
}

LightPartitionResult compute_light_partition_parts(const Graph& g, std::size_t parts, const ThresholdConfig& cfg,
                                                   std::uint64_t seed, const SolverOptions& opts) {
  const std::size_t delta = g.max_degree();
  LightPartitionResult out;
  if (delta < 4 || parts <= 1) {
    out.partition = Partition::single(g.node_count());
    out.per_part_bound = static_cast<double>(delta);
    out.short_circuit = true;
    return out;
  }
  out.base_parts = light_part_count(delta);
  if (parts > out.base_parts) {
    throw InputError("requested " + std::to_string(parts) + " parts but only " + std::to_string(out.base_parts) +
                     " base parts exist");
  }
  const LllInstance inst = build_light_partition_instance(g, cfg.defect_const);
  out.solve = solve(inst, Partition::single(inst.event_count()), cfg, derive_seed(seed, "light"), opts);
  Partition base{out.base_parts, {}};
  base.assignment.assign(out.solve->assignment.begin(), out.solve->assignment.end());
  out.partition = group_parts(base, parts);
  out.max_group_size = balanced_group_sizes(out.base_parts, parts).front();
  const int t = count_threshold(cfg.defect_const * log2_degree(delta));
  out.per_part_bound = static_cast<double>(std::max(t - 1, 0)) * static_cast<double>(out.max_group_size);
  return out;
}

LightPartitionResult compute_light_partition(const Graph& g, double x, const ThresholdConfig& cfg, std::uint64_t seed,
                                             const SolverOptions& opts) {
  const std::size_t delta = g.max_degree();
  if (!(x > 0) || x + 1e-9 < log2_degree(delta)) {
    throw InputError("light partition needs x >= log2(max degree)");
  }
  const auto parts =
      delta == 0 ? std::size_t{1} : static_cast<std::size_t>(std::ceil(static_cast<double>(delta) / x - 1e-9));
  return compute_light_partition_parts(g, std::max<std::size_t>(parts, 1), cfg, seed, opts);
}

bool ResilienceCheck::all_pass() const {
  return std::all_of(pass.begin(), pass.end(), [](char c) { return c != 0; });
}

double ResilienceCheck::max_estimate() const {
  return estimate.empty() ? 0.0 : *std::max_element(estimate.begin(), estimate.end());
}

ResilienceCheck verify_resilience_1part(const LllInstance& inst, const ThresholdConfig& cfg, std::size_t trials,
                                        std::uint64_t seed) {
  if (trials == 0) throw InputError("verify_resilience_1part needs at least one trial");
  ResilienceCheck out;
  out.trials = trials;
  const std::size_t n = inst.event_count();
  const double log_delta = log2_degree(inst.d_vars());
  out.a_star_threshold = cfg.defect_const * log_delta * 49.0 / 99.0;
  const int t_star = count_threshold(out.a_star_threshold);
  const int parts = n == 0 ? 1 : inst.variable(0).domain_size;

  std::vector<const MaxPartLoad*> loads(n);
  for (std::size_t a = 0; a < n; ++a) {
    loads[a] = std::get_if<MaxPartLoad>(&inst.event(static_cast<EventId>(a)).predicate);
    if (!loads[a]) throw InputError("verify_resilience_1part expects a light-partition instance");
  }

  std::vector<std::size_t> hits(n, 0);
  std::vector<int> row1(inst.variable_count());
  std::vector<int> counts(static_cast<std::size_t>(parts));
  Rng rng(derive_seed(seed, "a-star"));
  for (std::size_t s = 0; s < trials; ++s) {
    for (std::size_t v = 0; v < row1.size(); ++v) row1[v] = rng.draw(inst.variable(static_cast<VarId>(v)).weights);
    for (std::size_t a = 0; a < n; ++a) {
      std::fill(counts.begin(), counts.end(), 0);
      bool star = t_star <= 0;
      for (VarId u : loads[a]->vars) {
        if (++counts[static_cast<std::size_t>(row1[static_cast<std::size_t>(u)])] >= t_star) star = true;
      }
      hits[a] += star;
    }
  }
  out.estimate.resize(n);
  out.bound.resize(n);
  out.pass.resize(n);
  for (std::size_t a = 0; a < n; ++a) {
    const double est = static_cast<double>(hits[a]) / static_cast<double>(trials);
    const double mu = static_cast<double>(loads[a]->vars.size()) / parts;
    // Chernoff: Pr[X >= δμ] <= e^((3 - δ)μ) for δ >= 1, union over parts.
    double bound = 1.0;
    if (out.a_star_threshold >= mu) {
      bound = std::min(1.0, parts * std::exp(3.0 * mu - out.a_star_threshold));
    }
    const double sigma = std::sqrt(est * (1.0 - est) / static_cast<double>(trials));
    out.estimate[a] = est;
    out.bound[a] = bound;
    out.pass[a] = est <= bound + 3.0 * sigma;
  }
  return out;
}

nlohmann::json partition_json(const Partition& p) {
  return {{"part_count", p.part_count}, {"assignment", p.assignment}};
}

}  // namespace lll
