#include <doctest.h>

#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "helpers.hpp"
#include "lll/defective_coloring.hpp"
#include "lll/edge_coloring.hpp"
#include "lll/errors.hpp"
#include "lll/exact.hpp"
#include "lll/generators.hpp"
#include "lll/misra_gries.hpp"

using namespace lll;

namespace {

// Independent properness check: incident edges at a vertex never share a colour.
bool proper_edge_coloring(const Graph& g, const std::vector<int>& colors) {
  const auto edges = g.edges();
  if (colors.size() != edges.size()) return false;
  std::vector<std::set<int>> seen(g.node_count());
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (colors[e] < 0) return false;
    if (!seen[static_cast<std::size_t>(edges[e].first)].insert(colors[e]).second) return false;
    if (!seen[static_cast<std::size_t>(edges[e].second)].insert(colors[e]).second) return false;
  }
  return true;
}

std::size_t distinct(const std::vector<int>& colors) { return std::set<int>(colors.begin(), colors.end()).size(); }

std::size_t vertex_defect(const Graph& g, const std::vector<int>& colors) {
  std::size_t worst = 0;
  for (std::size_t v = 0; v < g.node_count(); ++v) {
    std::size_t same = 0;
    for (NodeId u : g.neighbors(static_cast<NodeId>(v))) same += colors[static_cast<std::size_t>(u)] == colors[v];
    worst = std::max(worst, same);
  }
  return worst;
}

std::size_t edge_defect(const Graph& g, const std::vector<int>& colors) {
  const auto edges = g.edges();
  std::vector<std::map<int, std::size_t>> per(g.node_count());
  std::size_t worst = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    worst = std::max(worst, ++per[static_cast<std::size_t>(edges[e].first)][colors[e]]);
    worst = std::max(worst, ++per[static_cast<std::size_t>(edges[e].second)][colors[e]]);
  }
  return worst;
}

Graph complete_graph(std::size_t n) {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) e.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return Graph::from_edges(n, e);
}

}  // namespace

TEST_CASE("exact helpers") {
  const Rational tenth = to_rational(0.1);
  CHECK(tenth == Rational(BigInt(3602879701896397), BigInt(1) << 55));
  CHECK(to_rational(-2.5) == Rational(-5, 2));
  CHECK(floor_of(Rational(7, 2)) == 3);
  CHECK(ceil_of(Rational(7, 2)) == 4);
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(ceil_of(Rational(-7, 2)) == -3);
  CHECK(ceil_of(Rational(6)) == 6);
  CHECK(to_string(Rational(3, 4)) == "3/4");
  CHECK(pow_int(Rational(2, 3), 3) == Rational(8, 27));
  const auto exact = log2_bracket(Rational(8));
  CHECK(exact.first == 3);
  CHECK(exact.second == 3);
  const auto half = log2_bracket(Rational(1, 4));
  CHECK(half.first == -2);
  for (int x : {3, 10, 1000, 12345}) {
    const auto [lo, hi] = log2_bracket(Rational(x));
    CHECK(lo < hi);
    CHECK(to_double(lo) <= std::log2(x));
    CHECK(to_double(hi) >= std::log2(x));
    CHECK(to_double(hi - lo) < 1e-7);
  }
}

TEST_CASE("split threshold and q range") {
  CHECK(split_threshold(16, 2, 4) == doctest::Approx(8.5));
  CHECK(split_threshold(1024, 2, 10) == doctest::Approx(512 + 1024.0 / 80));
  CHECK(q_in_range(0.3, 1024, 4));
  CHECK_FALSE(q_in_range(0.33, 1024, 4));
  CHECK(q_in_range(1, 65536, 4));
  CHECK_FALSE(q_in_range(1.01, 65536, 4));
  CHECK(q_in_range(std::sqrt(1024.0 / 1000.0), 1024, 3));
  CHECK_FALSE(q_in_range(1, 1, 3));
}

TEST_CASE("Chernoff envelopes") {
  CHECK(chernoff_vertex_bound(1024, 2) == doctest::Approx(std::exp(-1024.0 / (24 * 400))));
  CHECK(chernoff_edge_bound(1024, 2) == doctest::Approx(2 * std::exp(-1024.0 / (38 * 400))));
  CHECK(chernoff_vertex_bound(4096, 2) < chernoff_vertex_bound(1024, 2));
}

TEST_CASE("max_defect matches direct counts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const Graph g = testing::random_graph(40, 5.0, seed);
    Rng rng(seed);
    std::vector<int> vc(g.node_count()), ec(g.edge_count());
    for (auto& c : vc) c = static_cast<int>(rng.below(3));
    for (auto& c : ec) c = static_cast<int>(rng.below(3));
    CHECK(max_defect(g, ColoringKind::Vertex, vc) == vertex_defect(g, vc));
    CHECK(max_defect(g, ColoringKind::Edge, ec) == edge_defect(g, ec));
  }
}

TEST_CASE("vertex balancing leaves at most half the neighbours alike") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = testing::random_graph(60, 3.0 + static_cast<double>(seed % 7), seed);
    const auto colors = balance_vertex_split(g, seed);
    REQUIRE(colors.size() == g.node_count());
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      CHECK((colors[v] == 0 || colors[v] == 1));
      std::size_t same = 0;
      for (NodeId u : g.neighbors(static_cast<NodeId>(v))) same += colors[static_cast<std::size_t>(u)] == colors[v];
      CHECK(same <= g.degree(static_cast<NodeId>(v)) / 2);
    }
  }
}

TEST_CASE("edge balancing keeps each colour near half the degree") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Graph g = testing::random_graph(50, 2.0 + static_cast<double>(seed % 9), seed + 100);
    const auto edges = g.edges();
    const auto colors = balance_edge_split(g.node_count(), edges);
    REQUIRE(colors.size() == edges.size());
    std::vector<std::array<std::size_t, 2>> count(g.node_count(), {0, 0});
    for (std::size_t e = 0; e < edges.size(); ++e) {
      ++count[static_cast<std::size_t>(edges[e].first)][static_cast<std::size_t>(colors[e])];
      ++count[static_cast<std::size_t>(edges[e].second)][static_cast<std::size_t>(colors[e])];
    }
    // Exceptions are allowed only once per connected component.
    std::set<std::size_t> roots;
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const std::size_t deg = g.degree(static_cast<NodeId>(v));
      for (int c = 0; c < 2; ++c) {
        const auto k = count[v][static_cast<std::size_t>(c)];
        CHECK(k <= deg / 2 + 1);
        if (k > (deg + 1) / 2) {
          const auto dist = testing::bfs(g, static_cast<NodeId>(v));
          std::size_t root = v;
          for (std::size_t u = 0; u < g.node_count(); ++u) {
            if (dist[u] != SIZE_MAX) {
              root = u;
              break;
            }
          }
          CHECK(roots.insert(root).second);
        }
      }
    }
  }
}

TEST_CASE("split_once balance route meets the threshold") {
  const Graph g = random_regular(100, 16, 3);
  SplitOptions opts;
  opts.policy = SplitPolicy::ForceBalance;
  for (auto kind : {ColoringKind::Vertex, ColoringKind::Edge}) {
    const auto res = split_once(g, kind, 1.0, ThresholdConfig::relaxed(), 5, opts);
    CHECK(res.route == SplitRoute::Balance);
    CHECK(res.coloring.color_count == 2);
    CHECK(res.max_count == max_defect(g, kind, res.coloring.colors));
    CHECK(static_cast<double>(res.max_count) < res.threshold);
  }
}

TEST_CASE("split_once auto route balances when the envelope is too weak") {
  const Graph g = random_regular(100, 16, 4);
  const auto res = split_once(g, ColoringKind::Vertex, 1.0, ThresholdConfig::relaxed(), 5);
  CHECK(res.route == SplitRoute::Balance);
}

TEST_CASE("split_once LLL route on a cycle") {
  std::vector<std::pair<NodeId, NodeId>> e;
  for (NodeId v = 0; v < 30; ++v) e.emplace_back(v, (v + 1) % 30);
  const Graph g = Graph::from_edges(30, e);
  SplitOptions opts;
  opts.policy = SplitPolicy::ForceLll;
  const auto res = split_once(g, ColoringKind::Vertex, 1.0, ThresholdConfig::relaxed(), 11, opts);
  CHECK(res.route == SplitRoute::Lll);
  CHECK(static_cast<double>(max_defect(g, ColoringKind::Vertex, res.coloring.colors)) < res.threshold);
}

TEST_CASE("split instance events follow the threshold") {
  const Graph g = random_regular(30, 6, 1);
  const double threshold = split_threshold(6, 1, std::log2(6.0));
  const auto inst = build_split_instance(g, ColoringKind::Vertex, 1, 6, std::nullopt, false);
  CHECK_THROWS_AS(build_split_instance(g, ColoringKind::Vertex, 1, 6), InputError);
  Rng rng(2);
  for (int rep = 0; rep < 40; ++rep) {
    std::vector<int> x(g.node_count());
    for (auto& b : x) b = static_cast<int>(rng.below(2));
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      std::size_t same = 0;
      for (NodeId u : g.neighbors(static_cast<NodeId>(v))) same += x[static_cast<std::size_t>(u)] == x[v];
      CHECK(inst.holds(static_cast<EventId>(v), x) == (static_cast<double>(same) >= threshold));
    }
  }
}

TEST_CASE("iterate_halving trace and final defect") {
  const Graph g = random_regular(200, 64, 5);
  for (auto kind : {ColoringKind::Vertex, ColoringKind::Edge}) {
    const auto res = iterate_halving(g, kind, 2.0, ThresholdConfig::relaxed(), 9);
    CHECK(res.base == doctest::Approx(4.0));
    CHECK(res.iterations == 4);
    REQUIRE(res.trace.size() == 4);
    CHECK(res.coloring.color_count == 16);
    CHECK(res.coloring.x == doctest::Approx(4.0));
    for (const auto& it : res.trace) CHECK(static_cast<double>(it.measured) <= it.bound + 1e-9);
    for (int c : res.coloring.colors) CHECK((c >= 0 && c < 16));
    const auto defect = kind == ColoringKind::Vertex ? vertex_defect(g, res.coloring.colors)
                                                     : edge_defect(g, res.coloring.colors);
    CHECK(defect == res.final_defect);
    CHECK(static_cast<double>(defect) < 4.0 + 4.0 / 2.0);
  }
}

TEST_CASE("iterate_halving q range: strict throws, relaxed warns") {
  const Graph g = random_regular(100, 32, 5);
  CHECK_THROWS_AS(iterate_halving(g, ColoringKind::Vertex, 2.0, ThresholdConfig::paper(), 1), InputError);
  const auto res = iterate_halving(g, ColoringKind::Vertex, 2.0, ThresholdConfig::relaxed(), 1);
  CHECK_FALSE(res.warnings.empty());
  CHECK_THROWS_AS(iterate_halving(g, ColoringKind::Vertex, 0.5, ThresholdConfig::relaxed(), 1), InputError);
}

TEST_CASE("misra_gries colours properly with delta + 1 colours") {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    const Graph g = testing::random_graph(80, 2.0 + static_cast<double>(seed), seed);
    const auto colors = misra_gries(g);
    CHECK(proper_edge_coloring(g, colors));
    for (int c : colors) CHECK(c <= static_cast<int>(g.max_degree()));
  }
  for (std::size_t n : {2, 3, 7, 8, 13, 16}) {
    const Graph k = complete_graph(n);
    const auto colors = misra_gries(k);
    CHECK(proper_edge_coloring(k, colors));
    CHECK(distinct(colors) <= n);
  }
  const Graph k4 = complete_graph(4);
  CHECK_THROWS_AS(misra_gries(k4.node_count(), k4.edges(), 3), InputError);
  std::vector<std::pair<NodeId, NodeId>> loop{{0, 0}};
  CHECK_THROWS_AS(misra_gries(2, loop), InputError);
}

TEST_CASE("palette split and size") {
  const auto split = split_palette(25, 4);
  REQUIRE(split.ranges.size() == 4);
  std::vector<std::size_t> sizes;
  std::size_t next = 0;
  for (const auto& [a, b] : split.ranges) {
    CHECK(a == next);
    next = b;
    sizes.push_back(b - a);
  }
  CHECK(next == 25);
  CHECK(sizes == std::vector<std::size_t>{7, 6, 6, 6});
  CHECK_THROWS_AS(split_palette(5, 0), InputError);
  CHECK(palette_size(64, 0.5) == 96);
  CHECK(palette_size(10, 0.25) == 13);
  CHECK(palette_size(6, 1.0 / 6.0) == 7);
}

TEST_CASE("palette chain at q = 16") {
  const auto chain = check_palette_chain(0.25, 16, 1);
  CHECK(chain.exact_log);
  CHECK(chain.pass);
  CHECK(chain.lhs_value == doctest::Approx(81919));
  CHECK(chain.rhs_value == doctest::Approx(78336));
  CHECK(chain.lhs.find("81919") != std::string::npos);
  CHECK(chain.rhs.find("78336") != std::string::npos);
  // At q = 2 the defect slack outweighs the palette slack.
  CHECK_FALSE(check_palette_chain(1.0 / std::sqrt(2.0), 2, 1).pass);
}

TEST_CASE("plan_reduction: strict throws, relaxed warns") {
  CHECK_THROWS_AS(plan_reduction(64, 1.0 / std::sqrt(2.0), 1.0, true), ParameterError);
  const auto plan = plan_reduction(64, 1.0 / std::sqrt(2.0), 1.0, false);
  CHECK_FALSE(plan.warnings.empty());
  CHECK(plan.q == doctest::Approx(2.0));
}

TEST_CASE("verify_edge_coloring flags conflicts") {
  const Graph g = complete_graph(4);
  const auto good = misra_gries(g);
  const auto ok = verify_edge_coloring(g, good, 4);
  CHECK(ok.proper());
  CHECK(ok.within_bound());
  auto bad = good;
  bad[1] = bad[0];  // edges (0,1) and (0,2) share vertex 0
  const auto rep = verify_edge_coloring(g, bad, 4);
  CHECK_FALSE(rep.proper());
  CHECK(rep.conflicting_pairs >= 1);
  CHECK(std::find(rep.violating_edges.begin(), rep.violating_edges.end(), 0) != rep.violating_edges.end());
  CHECK_FALSE(verify_edge_coloring(g, good, 2).within_bound());
}

TEST_CASE("color_edges fallback with the minimal epsilon") {
  const Graph g = random_regular(500, 40, 3);
  const double eps = minimal_admissible_epsilon(40);
  CHECK(to_rational(eps) * 40 >= 1);
  const auto res = color_edges(g, eps, ThresholdConfig::paper(), 1);
  CHECK(res.path == EdgeColorPath::Fallback);
  CHECK(res.inequality_holds);
  CHECK(res.total_colors == palette_size(40, eps));
  CHECK(res.total_colors <= 42);
  CHECK(proper_edge_coloring(g, res.colors));
  CHECK(distinct(res.colors) <= 41);
}

TEST_CASE("color_edges single edge and empty graph") {
  std::vector<std::pair<NodeId, NodeId>> e{{0, 1}};
  const Graph g = Graph::from_edges(2, e);
  const auto res = color_edges(g, 1.0, ThresholdConfig::relaxed(), 1);
  CHECK(res.colors == std::vector<int>{0});
  CHECK(res.verification.colors_used == 1);
  const Graph empty = Graph::from_edges(3, {});
  CHECK(color_edges(empty, 0.5, ThresholdConfig::relaxed(), 1).colors.empty());
  CHECK_THROWS_AS(color_edges(g, 0.0, ThresholdConfig::relaxed(), 1), InputError);
}

TEST_CASE("color_edges rejects an epsilon below 1/delta") {
  const Graph g = random_regular(60, 10, 1);
  CHECK_THROWS_AS(color_edges(g, 0.05, ThresholdConfig::relaxed(), 1), ParameterError);
}

TEST_CASE("forced reduction colours every bucket in its own range") {
  const Graph g = random_regular(200, 64, 8);
  EdgeColorOptions opts;
  opts.force_reduction = true;
  const auto res = color_edges(g, 1.0 / std::sqrt(2.0), ThresholdConfig::relaxed(), 4, opts);
  CHECK(res.path == EdgeColorPath::Reduction);
  REQUIRE(res.plan.has_value());
  REQUIRE(res.halving.has_value());
  CHECK(res.buckets.size() == 16);
  CHECK(res.total_colors == palette_size(64, 1.0 / std::sqrt(2.0)));
  CHECK(proper_edge_coloring(g, res.colors));
  const auto edges = g.edges();
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto bucket = static_cast<std::size_t>(res.halving->coloring.colors[e]);
    const auto [lo, hi] = res.plan->palette.ranges[bucket];
    CHECK(static_cast<std::size_t>(res.colors[e]) >= lo);
    CHECK(static_cast<std::size_t>(res.colors[e]) < hi);
  }
  CHECK_FALSE(res.warnings.empty());
}

TEST_CASE("delta-o-delta epsilon") {
  CHECK(delta_o_delta_epsilon(65536) == doctest::Approx(0.25));
  CHECK(delta_o_delta_epsilon(16) == doctest::Approx(0.5));
  CHECK(delta_o_delta_epsilon(17) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(delta_o_delta_epsilon(4), InputError);
}
