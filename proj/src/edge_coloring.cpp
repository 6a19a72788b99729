#include "lll/edge_coloring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lll/errors.hpp"
#include "lll/exact.hpp"
#include "lll/misra_gries.hpp"

namespace lll {

PaletteSplit split_palette(std::size_t total_colors, std::size_t bucket_count) {
  if (bucket_count == 0) throw InputError("palette split needs at least one bucket");
  PaletteSplit split;
  split.total_colors = total_colors;
  split.bucket_count = bucket_count;
  const std::size_t base = total_colors / bucket_count;
  const std::size_t extra = total_colors % bucket_count;
  std::size_t first = 0;
  for (std::size_t b = 0; b < bucket_count; ++b) {
    const std::size_t size = base + (b < extra ? 1 : 0);
    split.ranges.emplace_back(first, first + size);
    first += size;
  }
  return split;
}

ChainCheck check_palette_chain(double eps, double q, double c_defect) {
  if (!(eps > 0) || !(q > 0) || !(c_defect > 0)) throw InputError("chain check needs positive eps, q and c");
  const Rational e = to_rational(eps);
  const Rational qr = to_rational(q);
  const Rational c = to_rational(c_defect);
  const auto [lo, hi] = log2_bracket(qr);
  ChainCheck out;
  out.exact_log = lo == hi;
  // Both sides are affine in x = c q^2 log^4 q, so the bracket ends bound the margin.
  bool pass = true;
  for (const Rational& l : {lo, hi}) {
    const Rational l4 = pow_int(l, 4);
    const Rational x = c * qr * qr * l4;
    const Rational lhs = (1 + e) * x - 1;
    const Rational rhs = (1 + e / 2) * (x + c * qr * l4);
    pass = pass && lhs >= rhs;
    if (l == lo) {
      out.lhs = to_string(lhs);
      out.rhs = to_string(rhs);
      out.lhs_value = to_double(lhs);
      out.rhs_value = to_double(rhs);
    }
  }
  out.pass = pass;
  return out;
}

double reduction_min_epsilon(double delta) {
  if (delta < 2) return std::numeric_limits<double>::infinity();
  return 8.0 * std::pow(std::log2(delta), 2.5) / std::sqrt(delta);
}

double minimal_admissible_epsilon(double delta) {
  if (delta < 1) throw InputError("minimal epsilon needs max degree >= 1");
  // Smallest double with eps·delta >= 1 in exact arithmetic.
  double fallback = 1.0 / delta;
  while (to_rational(fallback) * to_rational(delta) < 1) fallback = std::nextafter(fallback, 2.0);
  return std::min(reduction_min_epsilon(delta), fallback);
}

std::size_t palette_size(std::size_t delta, double eps) {
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  const BigInt total = ceil_of((1 + to_rational(eps)) * Rational(delta));
  return total.convert_to<std::size_t>();
}

ReductionPlan plan_reduction(std::size_t delta, double eps, double c_defect, bool strict) {
  if (delta < 2) throw InputError("reduction needs max degree >= 2");
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  if (!(c_defect > 0)) throw InputError("defect constant must be positive");
  ReductionPlan plan;
  plan.epsilon = eps;
  plan.q = 1.0 / (eps * eps);
  plan.c_defect = c_defect;
  plan.epsilon_prime = eps / 2.0;
  auto complain = [&](const std::string& msg) {
    if (strict) throw ParameterError(msg);
    plan.warnings.push_back(msg);
  };

  const double d = static_cast<double>(delta);
  if (eps < reduction_min_epsilon(d) * (1.0 - 1e-12)) {
    complain("epsilon " + std::to_string(eps) + " is below 8 log2^2.5 D / sqrt D = " +
             std::to_string(reduction_min_epsilon(d)));
  }
  if (!q_in_range(plan.q, d, 4)) {
    complain("q = " + std::to_string(plan.q) + " exceeds sqrt(D / log2^4 D)");
  }

  const double l4 = std::pow(std::log2(plan.q), 4);
  const double x = c_defect * plan.q * plan.q * l4;
  plan.bucket_degree = x + c_defect * plan.q * l4;
  const auto buckets = x > 0 ? static_cast<std::size_t>(std::floor(d / x + 1e-9)) : std::size_t{1};
  plan.palette = split_palette(palette_size(delta, eps), std::max<std::size_t>(1, buckets));
  plan.chain = check_palette_chain(eps, plan.q, c_defect);
  if (!plan.chain.pass) {
    complain("palette inequality fails: " + plan.chain.lhs + " < " + plan.chain.rhs);
  }
  return plan;
}

EdgeColoringReport verify_edge_coloring(const Graph& g, const std::vector<int>& colors, std::size_t palette_bound) {
  const auto edges = g.edges();
  if (colors.size() != edges.size()) {
    throw InputError("coloring has " + std::to_string(colors.size()) + " entries for " + std::to_string(edges.size()) +
                     " edges");
  }
  EdgeColoringReport report;
  report.palette_bound = palette_bound;
  std::vector<std::vector<std::size_t>> inc(g.node_count());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[static_cast<std::size_t>(edges[e].first)].push_back(e);
    inc[static_cast<std::size_t>(edges[e].second)].push_back(e);
    if (colors[e] < 0 || static_cast<std::size_t>(colors[e]) >= palette_bound) report.out_of_range.push_back(e);
  }
  std::vector<char> bad(edges.size(), 0);
  std::vector<std::pair<int, std::size_t>> at;
  for (const auto& list : inc) {
    at.clear();
    for (std::size_t e : list) at.emplace_back(colors[e], e);
    std::sort(at.begin(), at.end());
    for (std::size_t i = 0; i < at.size();) {
      std::size_t j = i;
      while (j < at.size() && at[j].first == at[i].first) ++j;
      if (j - i > 1) {
        report.conflicting_pairs += (j - i) * (j - i - 1) / 2;
        for (std::size_t k = i; k < j; ++k) bad[at[k].second] = 1;
      }
      i = j;
    }
  }
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (bad[e]) report.violating_edges.push_back(e);
  }
  std::vector<int> used(colors);
  std::sort(used.begin(), used.end());
  report.colors_used = static_cast<std::size_t>(std::unique(used.begin(), used.end()) - used.begin());
  return report;
}

std::string path_name(EdgeColorPath p) { return p == EdgeColorPath::Reduction ? "reduction" : "fallback"; }

EdgeColoringResult color_edges(const Graph& g, double eps, const ThresholdConfig& cfg, std::uint64_t seed,
                               const EdgeColorOptions& opts) {
  if (!(eps > 0)) throw InputError("epsilon must be positive");
  EdgeColoringResult out;
  const std::size_t delta = g.max_degree();
  const auto edges = g.edges();
  if (delta == 0) {
    out.inequality = "no edges";
    out.inequality_holds = true;
    out.verification = verify_edge_coloring(g, out.colors, 0);
    return out;
  }
  out.total_colors = palette_size(delta, eps);

  const double d = static_cast<double>(delta);
  const double q = 1.0 / (eps * eps);
  const double base = q >= 1 ? std::max(1.0, q * q * std::pow(std::log2(q), 4)) : 1.0;
  const bool halving_feasible = q >= 2 && d >= 2 && std::log2(d) - std::log2(base) >= 1.0 - 1e-9;
  const bool viable =
      halving_feasible && eps >= reduction_min_epsilon(d) * (1.0 - 1e-12) && q_in_range(q, d, 4);

  if (opts.force_reduction || viable) {
    if (!halving_feasible) {
      throw InputError("reduction needs q >= 2 and log2 D - log2(q^2 log2^4 q) >= 1");
    }
    out.path = EdgeColorPath::Reduction;
    HalvingResult halving = iterate_halving(g, ColoringKind::Edge, q, cfg, seed, opts.policy);
    const double x = halving.coloring.x;
    ReductionPlan plan = plan_reduction(delta, eps, x / halving.base, cfg.strict);
    plan.palette = split_palette(out.total_colors, halving.coloring.color_count);
    out.inequality = plan.chain.lhs + " >= " + plan.chain.rhs;
    out.inequality_holds = plan.chain.pass;
    out.warnings = plan.warnings;
    out.warnings.insert(out.warnings.end(), halving.warnings.begin(), halving.warnings.end());

    std::vector<std::vector<std::size_t>> members(halving.coloring.color_count);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      members[static_cast<std::size_t>(halving.coloring.colors[e])].push_back(e);
    }
    out.colors.assign(edges.size(), -1);
    for (std::size_t b = 0; b < members.size(); ++b) {
      BucketStats stats;
      stats.edges = members[b].size();
      stats.range = plan.palette.ranges[b];
      const std::size_t range_size = stats.range.second - stats.range.first;
      std::vector<NodeId> touched;
      for (std::size_t e : members[b]) {
        touched.push_back(edges[e].first);
        touched.push_back(edges[e].second);
      }
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      std::vector<std::pair<NodeId, NodeId>> local;
      std::vector<std::size_t> degree(touched.size(), 0);
      auto id = [&](NodeId v) {
        return static_cast<NodeId>(std::lower_bound(touched.begin(), touched.end(), v) - touched.begin());
      };
      for (std::size_t e : members[b]) {
        local.emplace_back(id(edges[e].first), id(edges[e].second));
        stats.max_degree = std::max({stats.max_degree, ++degree[static_cast<std::size_t>(local.back().first)],
                                     ++degree[static_cast<std::size_t>(local.back().second)]});
      }
      if (static_cast<double>(stats.max_degree) > plan.bucket_degree + 1e-9) {
        throw ContractViolation("bucket " + std::to_string(b) + " has degree " + std::to_string(stats.max_degree) +
                                " above the defect bound " + std::to_string(plan.bucket_degree));
      }
      if (stats.max_degree + 1 > range_size) {
        throw ReductionViolation("bucket " + std::to_string(b) + " needs " + std::to_string(stats.max_degree + 1) +
                                 " colors but its range has " + std::to_string(range_size));
      }
      const auto local_colors = misra_gries(touched.size(), local, static_cast<int>(range_size));
      for (std::size_t j = 0; j < members[b].size(); ++j) {
        out.colors[members[b][j]] = static_cast<int>(stats.range.first) + local_colors[j];
      }
      out.buckets.push_back(stats);
    }
    out.plan = std::move(plan);
    out.halving = std::move(halving);
  } else {
    // Whole-graph fallback: Delta + 1 colors fit whenever eps·Delta >= 1.
    const Rational slack = to_rational(eps) * Rational(delta);
    out.path = EdgeColorPath::Fallback;
    out.inequality = "eps*D = " + to_string(slack) + " >= 1, D+1 = " + std::to_string(delta + 1) +
                     " <= ceil((1+eps)D) = " + std::to_string(out.total_colors);
    out.inequality_holds = slack >= 1 && delta + 1 <= out.total_colors;
    if (!out.inequality_holds) {
      throw ParameterError("epsilon " + std::to_string(eps) + " admits neither the reduction nor the fallback at D = " +
                           std::to_string(delta));
    }
    out.colors = misra_gries(g.node_count(), edges, static_cast<int>(delta + 1));
    BucketStats stats;
    stats.edges = edges.size();
    stats.max_degree = delta;
    stats.range = {0, delta + 1};
    out.buckets.push_back(stats);
  }

  out.verification = verify_edge_coloring(g, out.colors, out.total_colors);
  if (!out.verification.proper() || !out.verification.within_bound()) {
    throw ContractViolation("edge coloring is improper or leaves the palette");
  }
  return out;
}

double delta_o_delta_epsilon(std::size_t n) {
  if (n < 5) throw InputError("delta-o-delta preset needs n >= 5");
  const double ll = std::log2(std::log2(static_cast<double>(n)));
  const double eps = 1.0 / std::ceil(ll);
  if (eps > 1.0 / ll + 1e-12) throw ContractViolation("preset epsilon exceeds 1 / log2 log2 n");
  return eps;
}

nlohmann::json to_json(const ReductionPlan& p) {
  nlohmann::json ranges = nlohmann::json::array();
  for (const auto& [a, b] : p.palette.ranges) ranges.push_back({a, b});
  return {{"epsilon", p.epsilon},
          {"q", p.q},
          {"c_defect", p.c_defect},
          {"bucket_degree", p.bucket_degree},
          {"epsilon_prime", p.epsilon_prime},
          {"total_colors", p.palette.total_colors},
          {"bucket_count", p.palette.bucket_count},
          {"ranges", ranges},
          {"chain", {{"pass", p.chain.pass}, {"exact_log", p.chain.exact_log}, {"lhs", p.chain.lhs}, {"rhs", p.chain.rhs}}},
          {"warnings", p.warnings}};
}

nlohmann::json to_json(const EdgeColoringReport& r) {
  return {{"proper", r.proper()},
          {"within_bound", r.within_bound()},
          {"violating_edges", r.violating_edges},
          {"conflicting_pairs", r.conflicting_pairs},
          {"out_of_range", r.out_of_range},
          {"colors_used", r.colors_used},
          {"palette_bound", r.palette_bound}};
}

nlohmann::json to_json(const EdgeColoringResult& r) {
  nlohmann::json buckets = nlohmann::json::array();
  for (const auto& b : r.buckets) {
    buckets.push_back({{"edges", b.edges}, {"max_degree", b.max_degree}, {"range", {b.range.first, b.range.second}}});
  }
  nlohmann::json j{{"path", path_name(r.path)},
                   {"total_colors", r.total_colors},
                   {"inequality", r.inequality},
                   {"inequality_holds", r.inequality_holds},
                   {"buckets", buckets},
                   {"verification", to_json(r.verification)},
                   {"warnings", r.warnings}};
  if (r.plan) j["plan"] = to_json(*r.plan);
  if (r.halving) j["halving"] = to_json(*r.halving);
  return j;
}

}  // namespace lll
