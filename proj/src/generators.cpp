#include "lll/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <unordered_set>

#include "lll/errors.hpp"
#include "lll/probability.hpp"
#include "lll/rng.hpp"

namespace lll {

namespace {

std::uint64_t edge_key(std::size_t u, std::size_t v) {
  if (u > v) std::swap(u, v);
  return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint64_t>(v);
}

}  // namespace

Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed) {
  if (d == 0) return Graph::from_edges(n, {});
  if (d >= n) throw InputError("d-regular graph needs d < n");
  if ((n * d) % 2 != 0) throw InputError("d-regular graph needs n·d even");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 1; j <= d / 2; ++j) edges.emplace_back(i, (i + j) % n);
  }
  if (d % 2 == 1) {
    for (std::size_t i = 0; i < n / 2; ++i) edges.emplace_back(i, i + n / 2);
  }
  std::unordered_set<std::uint64_t> present;
  for (const auto& [u, v] : edges) present.insert(edge_key(u, v));

  Rng rng(seed);
  const std::size_t m = edges.size();
  const std::size_t swaps = 10 * m;
  for (std::size_t s = 0; s < swaps; ++s) {
    const auto i = static_cast<std::size_t>(rng.below(m));
    const auto j = static_cast<std::size_t>(rng.below(m));
    if (i == j) continue;
    auto [a, b] = edges[i];
    auto [c, e] = edges[j];
    if (rng.below(2)) std::swap(c, e);
    // (a,b),(c,e) -> (a,e),(c,b)
    if (a == e || c == b || present.count(edge_key(a, e)) || present.count(edge_key(c, b))) continue;
    present.erase(edge_key(a, b));
    present.erase(edge_key(c, e));
    present.insert(edge_key(a, e));
    present.insert(edge_key(c, b));
    edges[i] = {a, e};
    edges[j] = {c, b};
  }
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(m);
  for (const auto& [u, v] : edges) out.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  Graph g = Graph::from_edges(n, out);
  for (std::size_t v = 0; v < n; ++v) {
    if (g.degree(static_cast<NodeId>(v)) != d) throw ContractViolation("regular generator lost regularity");
  }
  return g;
}

Graph gnp(std::size_t n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw InputError("G(n, p) needs 0 <= p <= 1");
  Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, edges);
}

CountThresholdParams count_threshold_params_for(std::size_t events, double p) {
  if (!(p > 0.0 && p <= 0.25)) throw InputError("target probability must lie in (0, 1/4]");
  CountThresholdParams params;
  params.events = events;
  params.k = 2;
  params.t = 2;
  params.m = static_cast<int>(std::ceil(1.0 / std::sqrt(p) - 1e-9));
  return params;
}

double count_threshold_probability(const CountThresholdParams& params) {
  const double hit = 1.0 / params.m;
  double total = 0.0;
  for (std::size_t j = static_cast<std::size_t>(std::max(params.t, 0)); j <= params.k; ++j) {
    double binom = 1.0;
    for (std::size_t i = 0; i < j; ++i) binom = binom * static_cast<double>(params.k - i) / static_cast<double>(i + 1);
    total += binom * std::pow(hit, static_cast<double>(j)) * std::pow(1.0 - hit, static_cast<double>(params.k - j));
  }
  return total;
}

LllInstance count_threshold_family(const CountThresholdParams& params, std::uint64_t seed) {
  if (params.m < 2) throw InputError("count-threshold family needs m >= 2");
  if (params.t < 1 || static_cast<std::size_t>(params.t) > params.k) {
    throw InputError("count-threshold family needs 1 <= t <= k");
  }
  const Graph h = random_regular(params.events, params.k, seed);
  std::vector<VariableSpec> vars;
  std::vector<EventSpec> events;
  Allocation alloc;
  for (std::size_t v = 0; v < params.events; ++v) {
    vars.push_back(VariableSpec::uniform(static_cast<VarId>(v), params.m));
    EventSpec ev;
    ev.id = static_cast<EventId>(v);
    ev.vars.push_back(static_cast<VarId>(v));
    CountThreshold pred;
    pred.reference_var = static_cast<VarId>(v);
    pred.threshold = params.t;
    pred.groups.emplace_back();
    for (NodeId u : h.neighbors(static_cast<NodeId>(v))) {
      ev.vars.push_back(u);
      pred.groups.back().push_back(u);
    }
    ev.predicate = std::move(pred);
    events.push_back(std::move(ev));
    alloc.owner.push_back(static_cast<EventId>(v));
  }
  return build_instance(std::move(vars), std::move(events), std::move(alloc));
}

double symmetric_criterion(const LllInstance& inst) {
  double p = 0.0;
  for (std::size_t a = 0; a < inst.event_count(); ++a) {
    p = std::max(p, event_probability(inst, static_cast<EventId>(a)).value);
  }
  return std::numbers::e * p * static_cast<double>(inst.d() + 1);
}

LllInstance random_ksat(std::size_t vars, std::size_t clauses, std::size_t k, std::uint64_t seed) {
  if (k == 0 || k > vars) throw InputError("k-SAT needs 1 <= k <= vars");
  if (clauses == 0) throw InputError("k-SAT needs at least one clause");
  constexpr std::size_t kAttempts = 1000;
  for (std::size_t attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    std::vector<std::vector<std::pair<std::size_t, int>>> cls(clauses);
    std::vector<std::size_t> uses(vars, 0);
    for (auto& c : cls) {
      std::vector<std::size_t> pool(vars);
      for (std::size_t i = 0; i < vars; ++i) pool[i] = i;
      for (std::size_t i = 0; i < k; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(vars - i));
        std::swap(pool[i], pool[j]);
        c.emplace_back(pool[i], static_cast<int>(rng.below(2)));
        ++uses[pool[i]];
      }
      std::sort(c.begin(), c.end());
    }
    // d = number of other clauses sharing a variable.
    std::size_t d = 0;
    for (std::size_t a = 0; a < clauses; ++a) {
      std::size_t deg = 0;
      for (std::size_t b = 0; b < clauses; ++b) {
        if (a == b) continue;
        const bool share = std::any_of(cls[a].begin(), cls[a].end(), [&](const auto& la) {
          return std::any_of(cls[b].begin(), cls[b].end(), [&](const auto& lb) { return la.first == lb.first; });
        });
        deg += share;
      }
      d = std::max(d, deg);
    }
    if (std::numbers::e * std::exp2(-static_cast<double>(k)) * static_cast<double>(d + 1) > 1.0) continue;

    std::vector<int> remap(vars, -1);
    std::vector<VariableSpec> specs;
    for (std::size_t v = 0; v < vars; ++v) {
      if (uses[v] == 0) continue;
      remap[v] = static_cast<int>(specs.size());
      specs.push_back(VariableSpec::uniform(static_cast<VarId>(specs.size()), 2));
    }
    std::vector<EventSpec> events;
    for (std::size_t a = 0; a < clauses; ++a) {
      EventSpec ev;
      ev.id = static_cast<EventId>(a);
      TruthTable table;
      table.satisfying.emplace_back();
      for (const auto& [v, bad] : cls[a]) {
        ev.vars.push_back(static_cast<VarId>(remap[v]));
        table.satisfying.back().push_back(bad);
      }
      ev.predicate = std::move(table);
      events.push_back(std::move(ev));
    }
    return build_instance(std::move(specs), std::move(events), std::nullopt);
  }
  throw InputError("no k-SAT instance with e·p·(d+1) <= 1 found for " + std::to_string(clauses) + " clauses over " +
                   std::to_string(vars) + " variables");
}

}  // namespace lll
