#include "lll/defective_coloring.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "lll/errors.hpp"
#include "lll/general_lll.hpp"
#include "lll/rng.hpp"

namespace lll {

std::string kind_name(ColoringKind k) { return k == ColoringKind::Vertex ? "vertex" : "edge"; }

ColoringKind parse_kind(const std::string& s) {
  if (s == "vertex") return ColoringKind::Vertex;
  if (s == "edge") return ColoringKind::Edge;
  throw InputError("unknown coloring kind '" + s + "'");
}

double split_threshold(double delta_current, double q, double log_delta) {
  return delta_current / 2.0 + delta_current / (4.0 * q * log_delta);
}

bool q_in_range(double q, double delta, int power) {
  if (delta < 2) return false;
  return q <= std::sqrt(delta / std::pow(std::log2(delta), power)) * (1.0 + 1e-12);
}

double chernoff_vertex_bound(double delta, double q) {
  const double ql = q * std::log2(delta);
  return std::exp(-delta / (24.0 * ql * ql));
}

double chernoff_edge_bound(double delta, double q) {
  const double ql = q * std::log2(delta);
  return 2.0 * std::exp(-delta / (38.0 * ql * ql));
}

namespace {

std::vector<std::vector<int>> incident_edges(std::size_t n, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::vector<int>> inc(n);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    inc[static_cast<std::size_t>(edges[e].first)].push_back(static_cast<int>(e));
    inc[static_cast<std::size_t>(edges[e].second)].push_back(static_cast<int>(e));
  }
  return inc;
}

}  // namespace

LllInstance build_split_instance(const Graph& g, ColoringKind kind, double q, double delta_current,
                                 std::optional<double> log_delta, bool enforce_q_range) {
  if (!(q > 0)) throw InputError("q must be positive");
  if (delta_current < 2) throw InputError("split instances need a degree of at least 2");
  if (enforce_q_range && !q_in_range(q, delta_current, 3)) {
    throw InputError("q = " + std::to_string(q) + " exceeds sqrt(D / log2^3 D) for D = " +
                     std::to_string(delta_current));
  }
  const double threshold = split_threshold(delta_current, q, log_delta.value_or(std::log2(delta_current)));
  std::vector<VariableSpec> vars;
  std::vector<EventSpec> events;
  Allocation alloc;

  if (kind == ColoringKind::Vertex) {
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      vars.push_back(VariableSpec::uniform(static_cast<VarId>(v), 2));
      EventSpec ev;
      ev.id = static_cast<EventId>(v);
      ev.vars.push_back(static_cast<VarId>(v));
      CountThreshold pred;
      pred.reference_var = static_cast<VarId>(v);
      pred.threshold = threshold;
      pred.groups.emplace_back();
      for (NodeId u : g.neighbors(static_cast<NodeId>(v))) {
        ev.vars.push_back(u);
        pred.groups.back().push_back(u);
      }
      ev.predicate = std::move(pred);
      events.push_back(std::move(ev));
      alloc.owner.push_back(static_cast<EventId>(v));
    }
  } else {
    const auto edges = g.edges();
    const auto inc = incident_edges(g.node_count(), edges);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      vars.push_back(VariableSpec::uniform(static_cast<VarId>(e), 2));
      const auto& at_u = inc[static_cast<std::size_t>(edges[e].first)];
      const auto& at_v = inc[static_cast<std::size_t>(edges[e].second)];
      EventSpec ev;
      ev.id = static_cast<EventId>(e);
      ev.vars.push_back(static_cast<VarId>(e));
      std::vector<VarId> others;
      for (int f : at_u) others.push_back(f);
      for (int f : at_v) others.push_back(f);
      std::sort(others.begin(), others.end());
      others.erase(std::unique(others.begin(), others.end()), others.end());
      for (VarId f : others) {
        if (f != static_cast<VarId>(e)) ev.vars.push_back(f);
      }
      CountThreshold pred;
      pred.reference_var = static_cast<VarId>(e);
      pred.threshold = threshold;
      pred.groups.emplace_back(at_u.begin(), at_u.end());
      pred.groups.emplace_back(at_v.begin(), at_v.end());
      ev.predicate = std::move(pred);
      events.push_back(std::move(ev));
      alloc.owner.push_back(static_cast<EventId>(e));
    }
  }
  return build_instance(std::move(vars), std::move(events), std::move(alloc));
}

std::vector<int> balance_vertex_split(const Graph& g, std::uint64_t seed) {
  const std::size_t n = g.node_count();
  Rng rng(seed);
  std::vector<int> color(n);
  for (auto& c : color) c = static_cast<int>(rng.below(2));
  std::vector<std::size_t> same(n, 0);
  std::deque<NodeId> queue;
  for (std::size_t v = 0; v < n; ++v) {
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) same[v] += color[static_cast<std::size_t>(u)] == color[v];
    if (2 * same[v] > g.degree(static_cast<NodeId>(v))) queue.push_back(static_cast<NodeId>(v));
  }
  // Each flip removes deg - 2z > 0 monochromatic edges, so this terminates.
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    const auto vi = static_cast<std::size_t>(v);
    const std::size_t deg = g.degree(v);
    if (2 * same[vi] <= deg) continue;
    color[vi] ^= 1;
    same[vi] = deg - same[vi];
    for (NodeId u : g.neighbors(v)) {
      const auto ui = static_cast<std::size_t>(u);
      if (color[ui] == color[vi]) ++same[ui];
      else --same[ui];
      if (2 * same[ui] > g.degree(u)) queue.push_back(u);
    }
  }
  return color;
}

std::vector<int> balance_edge_split(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges) {
  // Odd-degree vertices are joined to an extra vertex so that every degree is
  // even; alternating colours along Euler circuits then balances each vertex.
  const std::size_t dummy = node_count;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  ends.reserve(edges.size() + node_count);
  std::vector<std::vector<std::size_t>> adj(node_count + 1);
  for (const auto& [u, v] : edges) {
    adj[static_cast<std::size_t>(u)].push_back(ends.size());
    adj[static_cast<std::size_t>(v)].push_back(ends.size());
    ends.emplace_back(static_cast<std::size_t>(u), static_cast<std::size_t>(v));
  }
  for (std::size_t v = 0; v < node_count; ++v) {
    if (adj[v].size() % 2 == 0) continue;
    adj[v].push_back(ends.size());
    adj[dummy].push_back(ends.size());
    ends.emplace_back(v, dummy);
  }

  std::vector<char> used(ends.size(), 0);
  std::vector<std::size_t> next(node_count + 1, 0);
  std::vector<int> color(ends.size(), 0);
  auto circuit = [&](std::size_t start) {
    std::vector<std::pair<std::size_t, std::ptrdiff_t>> stack{{start, -1}};
    std::vector<std::size_t> order;
    while (!stack.empty()) {
      const auto [v, via] = stack.back();
      auto& k = next[v];
      while (k < adj[v].size() && used[adj[v][k]]) ++k;
      if (k < adj[v].size()) {
        const std::size_t e = adj[v][k];
        used[e] = 1;
        const std::size_t w = ends[e].first == v ? ends[e].second : ends[e].first;
        stack.emplace_back(w, static_cast<std::ptrdiff_t>(e));
      } else {
        stack.pop_back();
        if (via >= 0) order.push_back(static_cast<std::size_t>(via));
      }
    }
    for (std::size_t j = 0; j < order.size(); ++j) color[order[j]] = static_cast<int>(j % 2);
  };

  circuit(dummy);
  std::vector<std::size_t> by_degree(node_count);
  std::iota(by_degree.begin(), by_degree.end(), 0);
  std::stable_sort(by_degree.begin(), by_degree.end(),
                   [&](std::size_t a, std::size_t b) { return adj[a].size() < adj[b].size(); });
  for (std::size_t v : by_degree) circuit(v);
  color.resize(edges.size());
  return color;
}

std::size_t max_defect(const Graph& g, ColoringKind kind, const std::vector<int>& colors) {
  std::size_t best = 0;
  if (kind == ColoringKind::Vertex) {
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      std::size_t same = 0;
      for (NodeId u : g.neighbors(static_cast<NodeId>(v))) same += colors[static_cast<std::size_t>(u)] == colors[v];
      best = std::max(best, same);
    }
    return best;
  }
  const auto edges = g.edges();
  const auto inc = incident_edges(g.node_count(), edges);
  std::vector<std::size_t> count;
  for (const auto& list : inc) {
    for (int e : list) {
      const auto c = static_cast<std::size_t>(colors[static_cast<std::size_t>(e)]);
      if (count.size() <= c) count.resize(c + 1, 0);
      best = std::max(best, ++count[c]);
    }
    for (int e : list) count[static_cast<std::size_t>(colors[static_cast<std::size_t>(e)])] = 0;
  }
  return best;
}

namespace {

struct ClassSplit {
  std::vector<int> bits;
  SplitRoute route = SplitRoute::Balance;
  std::vector<std::string> warnings;
};

// Splits one class graph in two, without checking the outcome.
ClassSplit split_class(const Graph& g, ColoringKind kind, double q, const ThresholdConfig& cfg, std::uint64_t seed,
                       const SplitOptions& opts) {
  ClassSplit out;
  const double delta_c = opts.delta_current.value_or(static_cast<double>(g.max_degree()));
  const double log_delta = opts.log_delta.value_or(delta_c >= 2 ? std::log2(delta_c) : 1.0);

  bool use_lll = opts.policy == SplitPolicy::ForceLll;
  if (opts.policy == SplitPolicy::Auto && delta_c > 4) {
    const double dv = kind == ColoringKind::Vertex ? delta_c : 2.0 * delta_c - 1.0;
    const double p = kind == ColoringKind::Vertex ? chernoff_vertex_bound(delta_c, q) : chernoff_edge_bound(delta_c, q);
    const double r = static_cast<double>(max_rounds_parameter(static_cast<std::size_t>(dv)));
    use_lll = p <= std::exp2(-(cfg.gamma + 80.0) * dv / r);
  }
  const std::size_t objects = kind == ColoringKind::Vertex ? g.node_count() : g.edge_count();
  if (use_lll && objects > 0 && delta_c >= 2) {
    const LllInstance inst = build_split_instance(g, kind, q, delta_c, log_delta, false);
    GeneralOptions gopts;
    const std::size_t r = std::clamp<std::size_t>(opts.r, 1, max_rounds_parameter(inst.d_vars()));
    auto solved = solve_general(inst, r, cfg, seed, gopts);
    out.bits = std::move(solved.assignment);
    out.route = SplitRoute::Lll;
    out.warnings = std::move(solved.warnings);
    return out;
  }
  out.route = SplitRoute::Balance;
  out.bits = kind == ColoringKind::Vertex ? balance_vertex_split(g, seed) : balance_edge_split(g.node_count(), g.edges());
  return out;
}

// Class subgraph with monotone relabelling, so local edge order follows the
// original edge order.
struct ClassGraph {
  Graph graph;
  std::vector<std::size_t> objects;  // original vertex or edge indices, ascending
};

}  // namespace

SplitResult split_once(const Graph& g, ColoringKind kind, double q, const ThresholdConfig& cfg, std::uint64_t seed,
                       const SplitOptions& opts) {
  if (!(q > 0)) throw InputError("q must be positive");
  SplitResult out;
  const double delta_c = opts.delta_current.value_or(static_cast<double>(g.max_degree()));
  const double log_delta = opts.log_delta.value_or(delta_c >= 2 ? std::log2(delta_c) : 1.0);
  if (delta_c >= 2 && !q_in_range(q, delta_c, 3)) {
    const std::string msg = "q = " + std::to_string(q) + " exceeds sqrt(D / log2^3 D) for D = " + std::to_string(delta_c);
    if (cfg.strict) throw InputError(msg);
    out.warnings.push_back(msg);
  }
  auto split = split_class(g, kind, q, cfg, seed, opts);
  out.route = split.route;
  out.warnings.insert(out.warnings.end(), split.warnings.begin(), split.warnings.end());
  out.threshold = delta_c >= 2 ? split_threshold(delta_c, q, log_delta) : 1.0;
  out.coloring.kind = kind;
  out.coloring.colors = std::move(split.bits);
  out.coloring.color_count = 2;
  out.coloring.q = q;
  out.coloring.x = delta_c / 2.0;
  out.coloring.defect_bound = out.coloring.x + out.coloring.x / (2.0 * q * log_delta);
  out.max_count = max_defect(g, kind, out.coloring.colors);
  const std::size_t objects = kind == ColoringKind::Vertex ? g.node_count() : g.edge_count();
  if (objects > 0 && static_cast<int>(out.max_count) >= count_threshold(out.threshold)) {
    throw ContractViolation("split leaves a count of " + std::to_string(out.max_count) + ", threshold " +
                            std::to_string(out.threshold));
  }
  return out;
}

HalvingResult iterate_halving(const Graph& g, ColoringKind kind, double q, const ThresholdConfig& cfg,
                              std::uint64_t seed, SplitPolicy policy) {
  if (!(q >= 1)) throw InputError("iterate_halving needs q >= 1");
  const double delta = static_cast<double>(g.max_degree());
  if (delta < 2) throw InputError("iterate_halving needs max degree >= 2");
  HalvingResult out;
  if (!q_in_range(q, delta, 4)) {
    const std::string msg = "q = " + std::to_string(q) + " exceeds sqrt(D / log2^4 D) for D = " + std::to_string(delta);
    if (cfg.strict) throw InputError(msg);
    out.warnings.push_back(msg);
  }
  const double log_delta = std::log2(delta);
  const double log_q = std::log2(q);
  out.base = std::max(1.0, q * q * std::pow(log_q, 4));
  const double k_real = log_delta - std::log2(out.base);
  if (k_real < 1.0 - 1e-9) {
    throw InputError("iteration count log2 D - log2(q^2 log2^4 q) is below 1");
  }
  const auto k = static_cast<std::size_t>(std::floor(k_real + 1e-9));

  const std::size_t objects = kind == ColoringKind::Vertex ? g.node_count() : g.edge_count();
  const auto all_edges = kind == ColoringKind::Edge ? g.edges() : std::vector<std::pair<NodeId, NodeId>>{};
  std::vector<int> colors(objects, 0);

  for (std::size_t i = 1; i <= k; ++i) {
    HalvingIteration rec;
    rec.index = i;
    const double scale = std::exp2(static_cast<double>(i - 1));
    rec.delta_i = delta / scale + delta * static_cast<double>(i - 1) / (scale * q * log_delta);
    if (rec.delta_i < 2.0 * out.base - 1e-9) {
      throw ContractViolation("iteration " + std::to_string(i) + ": class degree bound " + std::to_string(rec.delta_i) +
                              " fell below 2 q^2 log^4 q");
    }
    const std::size_t classes = std::size_t{1} << (i - 1);
    std::vector<std::vector<std::size_t>> members(classes);
    for (std::size_t o = 0; o < objects; ++o) members[static_cast<std::size_t>(colors[o])].push_back(o);

    for (std::size_t c = 0; c < classes; ++c) {
      if (members[c].empty()) continue;
      ClassGraph cls;
      cls.objects = members[c];
      if (kind == ColoringKind::Vertex) {
        std::vector<NodeId> nodes(cls.objects.begin(), cls.objects.end());
        cls.graph = g.induced(nodes);
      } else {
        std::vector<NodeId> touched;
        for (std::size_t e : cls.objects) {
          touched.push_back(all_edges[e].first);
          touched.push_back(all_edges[e].second);
        }
        std::sort(touched.begin(), touched.end());
        touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
        std::vector<std::pair<NodeId, NodeId>> local;
        local.reserve(cls.objects.size());
        auto id = [&](NodeId v) {
          return static_cast<NodeId>(std::lower_bound(touched.begin(), touched.end(), v) - touched.begin());
        };
        for (std::size_t e : cls.objects) local.emplace_back(id(all_edges[e].first), id(all_edges[e].second));
        cls.graph = Graph::from_edges(touched.size(), local);
      }
      SplitOptions sopts;
      sopts.policy = policy;
      sopts.delta_current = rec.delta_i;
      sopts.log_delta = log_delta;
      ClassSplit split;
      try {
        split = split_class(cls.graph, kind, q, cfg, derive_seed(derive_seed(seed, i), c), sopts);
      } catch (const Error& e) {
        throw SolveFailure("iteration " + std::to_string(i) + ", class " + std::to_string(c) + ": " + e.what());
      }
      (split.route == SplitRoute::Lll ? rec.lll_splits : rec.balance_splits) += 1;
      for (const auto& w : split.warnings) out.warnings.push_back(w);
      for (std::size_t j = 0; j < cls.objects.size(); ++j) {
        colors[cls.objects[j]] = 2 * static_cast<int>(c) + split.bits[j];
      }
    }

    const double scale_i = std::exp2(static_cast<double>(i));
    rec.bound = delta / scale_i + delta * static_cast<double>(i) / (scale_i * q * log_delta);
    rec.measured = max_defect(g, kind, colors);
    out.trace.push_back(rec);
    if (static_cast<double>(rec.measured) > rec.bound + 1e-9) {
      throw ContractViolation("iteration " + std::to_string(i) + ": class degree " + std::to_string(rec.measured) +
                              " exceeds " + std::to_string(rec.bound));
    }
  }

  out.iterations = k;
  out.coloring.kind = kind;
  out.coloring.colors = std::move(colors);
  out.coloring.color_count = std::size_t{1} << k;
  out.coloring.q = q;
  out.coloring.x = delta / std::exp2(static_cast<double>(k));
  out.coloring.defect_bound = out.coloring.x + out.coloring.x / q;
  out.final_defect = max_defect(g, kind, out.coloring.colors);
  if (!(static_cast<double>(out.final_defect) < out.coloring.defect_bound)) {
    throw ContractViolation("final defect " + std::to_string(out.final_defect) + " is not below x + x/q = " +
                            std::to_string(out.coloring.defect_bound));
  }
  return out;
}

nlohmann::json to_json(const HalvingResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& it : r.trace) {
    trace.push_back({{"iteration", it.index},
                     {"delta_i", it.delta_i},
                     {"bound", it.bound},
                     {"measured", it.measured},
                     {"lll_splits", it.lll_splits},
                     {"balance_splits", it.balance_splits}});
  }
  return {{"kind", kind_name(r.coloring.kind)},
          {"iterations", r.iterations},
          {"color_count", r.coloring.color_count},
          {"x", r.coloring.x},
          {"q", r.coloring.q},
          {"defect_bound", r.coloring.defect_bound},
          {"final_defect", r.final_defect},
          {"base", r.base},
          {"trace", trace},
          {"warnings", r.warnings}};
}

}  // namespace lll
