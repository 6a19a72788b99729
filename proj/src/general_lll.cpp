#include "lll/general_lll.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lll/errors.hpp"
#include "lll/rng.hpp"

namespace lll {

std::size_t max_rounds_parameter(std::size_t d_vars) {
  if (d_vars < 2) return 1;
  const auto r = static_cast<std::size_t>(std::floor(static_cast<double>(d_vars) / std::log2(static_cast<double>(d_vars)) + 1e-12));
  return std::max<std::size_t>(r, 1);
}

CriterionReport criterion_check(const LllInstance& inst, std::size_t r, double c, const EstimateOptions& opts) {
  const std::size_t max_r = max_rounds_parameter(inst.d_vars());
  if (r < 1 || r > max_r) {
    throw InputError("r = " + std::to_string(r) + " outside [1, " + std::to_string(max_r) + "]");
  }
  CriterionReport out;
  out.c = c;
  out.r = r;
  for (std::size_t a = 0; a < inst.event_count(); ++a) {
    const auto est = event_probability(inst, static_cast<EventId>(a), opts);
    out.p = std::max(out.p, est.value);
    out.exact = out.exact && est.exact;
  }
  out.bound = std::exp2(-c * static_cast<double>(inst.d_vars()) / static_cast<double>(r));
  out.pass = out.p <= out.bound * (1.0 + 1e-12);
  out.margin = out.p > 0 ? out.bound / out.p : std::numeric_limits<double>::infinity();
  return out;
}

CertificateReport resilience_certificate(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg) {
  if (part.assignment.size() != inst.event_count()) {
    throw InputError("partition covers " + std::to_string(part.assignment.size()) + " events, expected " +
                     std::to_string(inst.event_count()));
  }
  part.validate(inst.event_count());
  CertificateReport out;
  out.threshold = ThresholdConfig::threshold(inst.d(), cfg.c2);
  const double inner = ThresholdConfig::threshold(inst.d(), cfg.c3);
  const Graph& alloc = inst.alloc_graph();
  std::vector<std::size_t> load(part.part_count, 0);
  EstimateOptions opts = estimate_options(cfg, 0);
  out.per_event.resize(inst.event_count());
  for (std::size_t a = 0; a < inst.event_count(); ++a) {
    const double p = event_probability(inst, static_cast<EventId>(a), opts).value;
    std::fill(load.begin(), load.end(), 0);
    ++load[static_cast<std::size_t>(part.assignment[a])];
    for (NodeId b : alloc.neighbors(static_cast<NodeId>(a))) ++load[static_cast<std::size_t>(part.assignment[static_cast<std::size_t>(b)])];
    double subsets = 0.0;
    for (auto k : load) {
      if (k > 0) subsets += std::exp2(static_cast<double>(k));
    }
    out.per_event[a] = p > 0 ? subsets * p / inner : 0.0;
    out.value = std::max(out.value, out.per_event[a]);
  }
  out.pass = out.value <= out.threshold;
  return out;
}

std::size_t preset_r(const LllInstance& inst, RPreset preset) {
  const std::size_t dv = inst.d_vars();
  const std::size_t max_r = max_rounds_parameter(dv);
  const double log_dv = dv >= 2 ? std::log2(static_cast<double>(dv)) : 1.0;
  std::size_t r = 1;
  switch (preset) {
    case RPreset::Manual: r = 1; break;
    case RPreset::Polynomial: r = static_cast<std::size_t>(std::ceil(static_cast<double>(dv) / log_dv - 1e-12)); break;
    case RPreset::Subexponential: r = static_cast<std::size_t>(std::ceil(log_dv - 1e-12)); break;
  }
  return std::clamp<std::size_t>(r, 1, max_r);
}

GeneralResult solve_general(const LllInstance& inst, std::size_t r, const ThresholdConfig& cfg, std::uint64_t seed,
                            const GeneralOptions& opts) {
  cfg.validate();
  GeneralResult out;
  const double c = opts.c.value_or(cfg.gamma + 80.0);
  out.criterion = criterion_check(inst, r, c, estimate_options(cfg, derive_seed(seed, "criterion")));
  if (!out.criterion.pass) {
    const std::string msg = "criterion p <= 2^(-c d_vars / r) fails: p = " + std::to_string(out.criterion.p) +
                            ", bound = " + std::to_string(out.criterion.bound);
    if (cfg.strict) throw PreconditionError(msg);
    out.warnings.push_back(msg);
  }

  if (r <= 1) {
    out.partition = Partition::single(inst.event_count());
  } else {
    auto light = compute_light_partition_parts(inst.alloc_graph(), r, cfg, derive_seed(seed, "partition"), opts.solver);
    out.partition = std::move(light.partition);
    if (light.solve) out.partition_rounds = light.solve->stage.rounds_used;
    if (light.short_circuit) out.warnings.push_back("allocation graph too small for a light partition; using one part");
  }

  out.certificate = resilience_certificate(inst, out.partition, cfg);
  if (!out.certificate.pass) {
    const std::string msg = "resilience certificate " + std::to_string(out.certificate.value) + " exceeds d^-c2 = " +
                            std::to_string(out.certificate.threshold);
    if (cfg.strict) throw PreconditionError(msg);
    out.warnings.push_back(msg);
  }

  out.solve = solve(inst, out.partition, cfg, derive_seed(seed, "solve"), opts.solver);
  out.assignment = out.solve.assignment;
  return out;
}

nlohmann::json to_json(const CriterionReport& c) {
  return {{"pass", c.pass}, {"p", c.p},     {"bound", c.bound}, {"margin", std::isinf(c.margin) ? -1.0 : c.margin},
          {"exact", c.exact}, {"c", c.c}, {"r", c.r}};
}

nlohmann::json to_json(const CertificateReport& c) {
  return {{"value", c.value}, {"threshold", c.threshold}, {"pass", c.pass}};
}

nlohmann::json to_json(const GeneralResult& r) {
  return {{"criterion", to_json(r.criterion)},
          {"certificate", to_json(r.certificate)},
          {"part_count", r.partition.part_count},
          {"partition_rounds", r.partition_rounds},
          {"stage", to_json(r.solve.stage)},
          {"post", to_json(r.solve.post)},
          {"warnings", r.warnings}};
}

}  // namespace lll
