#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <queue>
#include <set>
#include <vector>

#include "lll/graph.hpp"
#include "lll/instance.hpp"
#include "lll/rng.hpp"

namespace testing {

using namespace lll;

// Random simple graph with roughly the given average degree.
inline Graph random_graph(std::size_t n, double avg_degree, std::uint64_t seed) {
  Rng rng(seed);
  const double p = n > 1 ? avg_degree / static_cast<double>(n - 1) : 0.0;
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      if (rng.uniform() < p) edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
    }
  }
  return Graph::from_edges(n, edges);
}

// BFS distances from v; unreachable nodes get SIZE_MAX.
inline std::vector<std::size_t> bfs(const Graph& g, NodeId v) {
  std::vector<std::size_t> dist(g.node_count(), SIZE_MAX);
  std::queue<NodeId> q;
  dist[static_cast<std::size_t>(v)] = 0;
  q.push(v);
  while (!q.empty()) {
    const NodeId u = q.front();
    q.pop();
    for (NodeId w : g.neighbors(u)) {
      if (dist[static_cast<std::size_t>(w)] != SIZE_MAX) continue;
      dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
      q.push(w);
    }
  }
  return dist;
}

// Calls f on every total assignment together with its probability.
inline void for_each_assignment(const LllInstance& inst,
                                const std::function<void(const std::vector<int>&, double)>& f) {
  std::vector<int> a(inst.variable_count(), 0);
  while (true) {
    double w = 1.0;
    for (std::size_t v = 0; v < a.size(); ++v) w *= inst.variables()[v].weights[static_cast<std::size_t>(a[v])];
    f(a, w);
    std::size_t i = 0;
    for (; i < a.size(); ++i) {
      if (++a[i] < inst.variables()[i].domain_size) break;
      a[i] = 0;
    }
    if (i == a.size()) return;
  }
}

// Pr[A] by full enumeration over every variable of the instance.
inline double brute_probability(const LllInstance& inst, EventId a) {
  double total = 0.0;
  for_each_assignment(inst, [&](const std::vector<int>& x, double w) {
    if (inst.holds(a, x)) total += w;
  });
  return total;
}

// Random TruthTable instance over fair bits: each event picks `arity`
// distinct variables and a set of bad rows.
inline LllInstance random_table_instance(std::size_t vars, std::size_t events, std::size_t arity, double bad_fraction,
                                         std::uint64_t seed) {
  Rng rng(seed);
  std::vector<VariableSpec> specs;
  for (std::size_t v = 0; v < vars; ++v) specs.push_back(VariableSpec::uniform(static_cast<VarId>(v), 2));
  std::vector<EventSpec> evs;
  std::vector<char> used(vars, 0);
  for (std::size_t a = 0; a < events; ++a) {
    std::vector<VarId> pool(vars);
    for (std::size_t i = 0; i < vars; ++i) pool[i] = static_cast<VarId>(i);
    EventSpec ev;
    ev.id = static_cast<EventId>(a);
    for (std::size_t i = 0; i < arity; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(vars - i));
      std::swap(pool[i], pool[j]);
      ev.vars.push_back(pool[i]);
      used[static_cast<std::size_t>(pool[i])] = 1;
    }
    TruthTable t;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << arity); ++code) {
      if (rng.uniform() >= bad_fraction) continue;
      std::vector<int> row;
      for (std::size_t i = 0; i < arity; ++i) row.push_back(static_cast<int>(code >> i & 1U));
      t.satisfying.push_back(row);
    }
    if (t.satisfying.empty()) t.satisfying.push_back(std::vector<int>(arity, 0));
    ev.predicate = t;
    evs.push_back(ev);
  }
  // Every variable must be referenced; attach leftovers to event 0 as
  // don't-care positions (rows are duplicated across their values).
  for (std::size_t v = 0; v < vars; ++v) {
    if (used[v]) continue;
    auto& ev = evs[0];
    ev.vars.push_back(static_cast<VarId>(v));
    auto& t = std::get<TruthTable>(ev.predicate);
    std::vector<std::vector<int>> rows;
    for (auto row : t.satisfying) {
      row.push_back(0);
      rows.push_back(row);
      row.back() = 1;
      rows.push_back(row);
    }
    t.satisfying = rows;
  }
  return build_instance(std::move(specs), std::move(evs));
}

}  // namespace testing
