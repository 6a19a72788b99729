#include <doctest.h>

#include <cmath>
#include <numeric>

#include "helpers.hpp"
#include "lll/errors.hpp"
#include "lll/general_lll.hpp"
#include "lll/generators.hpp"
#include "lll/light_partition.hpp"
#include "lll/predicate.hpp"

using namespace lll;

TEST_CASE("light_part_count is ceil(delta / log2 delta)") {
  CHECK(light_part_count(4) == 2);
  CHECK(light_part_count(8) == 3);
  CHECK(light_part_count(16) == 4);
  CHECK(light_part_count(32) == 7);
  CHECK(light_part_count(1024) == 103);
  for (std::size_t d = 4; d < 300; ++d) {
    const double ratio = static_cast<double>(d) / std::log2(static_cast<double>(d));
    const auto k = light_part_count(d);
    CHECK(static_cast<double>(k) >= ratio - 1e-9);
    CHECK(static_cast<double>(k) < ratio + 1);
  }
}

TEST_CASE("balanced_group_sizes covers every item") {
  for (std::size_t items = 1; items <= 40; ++items) {
    for (std::size_t groups = 1; groups <= items; ++groups) {
      const auto sizes = balanced_group_sizes(items, groups);
      REQUIRE(sizes.size() == groups);
      CHECK(std::accumulate(sizes.begin(), sizes.end(), std::size_t{0}) == items);
      CHECK(sizes.front() - sizes.back() <= 1);
      CHECK(std::is_sorted(sizes.rbegin(), sizes.rend()));
    }
  }
  CHECK_THROWS_AS(balanced_group_sizes(5, 0), InputError);
}

TEST_CASE("group_parts maps contiguous base parts") {
  Partition base{7, {0, 1, 2, 3, 4, 5, 6, 6, 0}};
  const auto g = group_parts(base, 3);
  CHECK(g.part_count == 3);
  // sizes 3, 2, 2
  CHECK(g.assignment == std::vector<std::int32_t>{0, 0, 0, 1, 1, 2, 2, 2, 0});
  CHECK_THROWS_AS(group_parts(base, 8), InputError);
}

TEST_CASE("light partition short-circuits small degree") {
  std::vector<std::pair<NodeId, NodeId>> path{{0, 1}, {1, 2}, {2, 3}};
  const Graph g = Graph::from_edges(4, path);
  const auto res = compute_light_partition(g, 2.0, ThresholdConfig::relaxed(), 1);
  CHECK(res.short_circuit);
  CHECK(res.partition.part_count == 1);
  CHECK_FALSE(res.solve.has_value());
}

TEST_CASE("light partition rejects x below log2 delta") {
  const Graph g = random_regular(40, 8, 3);
  CHECK_THROWS_AS(compute_light_partition(g, 2.5, ThresholdConfig::relaxed(), 1), InputError);
}

TEST_CASE("light partition honours its per-part bound") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const Graph g = random_regular(120, 8, seed);
    const auto res = compute_light_partition(g, 3.0, ThresholdConfig::relaxed(), seed);
    CHECK_FALSE(res.short_circuit);
    CHECK(res.partition.part_count == 3);
    REQUIRE(res.solve.has_value());
    CHECK(per_part_neighbor_counts(g, res.partition, 0).size() == 3);
    for (std::size_t v = 0; v < g.node_count(); ++v) {
      const auto counts = per_part_neighbor_counts(g, res.partition, static_cast<NodeId>(v));
      for (auto c : counts) CHECK(static_cast<double>(c) <= res.per_part_bound);
    }
  }
}

TEST_CASE("light partition instance events match the load predicate") {
  const Graph g = random_regular(30, 6, 2);
  const auto inst = build_light_partition_instance(g, 1.5);
  CHECK(inst.event_count() == 30);
  CHECK(inst.variable_count() == 30);
  const int t = count_threshold(1.5 * std::log2(6.0));
  Rng rng(4);
  const auto parts = light_part_count(6);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> x(30);
    for (auto& v : x) v = static_cast<int>(rng.below(parts));
    for (std::size_t a = 0; a < 30; ++a) {
      std::vector<int> load(parts, 0);
      for (NodeId u : g.neighbors(static_cast<NodeId>(a))) ++load[static_cast<std::size_t>(x[static_cast<std::size_t>(u)])];
      const bool bad = *std::max_element(load.begin(), load.end()) >= t;
      CHECK(inst.holds(static_cast<EventId>(a), x) == bad);
    }
  }
}

TEST_CASE("max_rounds_parameter") {
  CHECK(max_rounds_parameter(1) == 1);
  CHECK(max_rounds_parameter(2) == 2);
  CHECK(max_rounds_parameter(4) == 2);
  CHECK(max_rounds_parameter(16) == 4);
  CHECK(max_rounds_parameter(1024) == 102);
  for (std::size_t d = 2; d < 500; ++d) {
    const auto r = max_rounds_parameter(d);
    const double ratio = static_cast<double>(d) / std::log2(static_cast<double>(d));
    CHECK(static_cast<double>(r) <= ratio + 1e-9);
    CHECK(static_cast<double>(r + 1) > ratio);
  }
}

TEST_CASE("criterion check computes the bound and rejects bad r") {
  const auto inst = random_ksat(60, 20, 5, 5);
  const auto dv = inst.d_vars();
  const auto rep = criterion_check(inst, 1, 0.1);
  CHECK(rep.bound == doctest::Approx(std::exp2(-0.1 * static_cast<double>(dv))));
  CHECK(rep.p == doctest::Approx(1.0 / 32));
  CHECK(rep.pass == (rep.p <= rep.bound));
  CHECK_THROWS_AS(criterion_check(inst, 0, 1.0), InputError);
  CHECK_THROWS_AS(criterion_check(inst, max_rounds_parameter(dv) + 1, 1.0), InputError);
}

TEST_CASE("certificate matches a direct sum and shrinks under refinement") {
  const auto cfg = ThresholdConfig::relaxed();
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto inst = testing::random_table_instance(10, 8, 3, 0.2, seed);
    const auto n = inst.event_count();
    Partition coarse{2, std::vector<std::int32_t>(n)};
    Partition fine{4, std::vector<std::int32_t>(n)};
    for (std::size_t a = 0; a < n; ++a) {
      fine.assignment[a] = static_cast<std::int32_t>(a % 4);
      coarse.assignment[a] = fine.assignment[a] / 2;
    }
    const auto c = resilience_certificate(inst, coarse, cfg);
    const auto f = resilience_certificate(inst, fine, cfg);
    const double scale = std::pow(static_cast<double>(std::max<std::size_t>(inst.d(), 2)), cfg.c3);
    for (std::size_t a = 0; a < n; ++a) {
      std::vector<int> load(2, 0);
      ++load[static_cast<std::size_t>(coarse.assignment[a])];
      for (NodeId b : inst.alloc_graph().neighbors(static_cast<NodeId>(a))) {
        ++load[static_cast<std::size_t>(coarse.assignment[static_cast<std::size_t>(b)])];
      }
      double sum = 0;
      for (int k : load) sum += k > 0 ? std::exp2(k) : 0.0;
      const double p = testing::brute_probability(inst, static_cast<EventId>(a));
      CHECK(c.per_event[a] == doctest::Approx(sum * p * scale));
      CHECK(f.per_event[a] <= c.per_event[a] + 1e-9);
    }
  }
}

TEST_CASE("preset_r stays within range") {
  const auto inst = random_ksat(60, 20, 5, 2);
  const auto dv = inst.d_vars();
  const auto poly = preset_r(inst, RPreset::Polynomial);
  const auto sub = preset_r(inst, RPreset::Subexponential);
  CHECK(poly >= 1);
  CHECK(poly <= max_rounds_parameter(dv));
  CHECK(sub >= 1);
  CHECK(sub <= max_rounds_parameter(dv));
  CHECK(sub == std::min<std::size_t>(static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(dv)))),
                                     max_rounds_parameter(dv)));
}

TEST_CASE("solve_general: strict rejects, relaxed warns and solves") {
  const auto inst = random_ksat(60, 20, 5, 9);
  CHECK_THROWS_AS(solve_general(inst, 1, ThresholdConfig::paper(), 1), PreconditionError);
  int valid = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto res = solve_general(inst, 2, ThresholdConfig::relaxed(), seed);
    CHECK_FALSE(res.warnings.empty());
    CHECK(res.partition.part_count <= 2);
    CHECK(res.solve.stage.rounds_used == 5 * res.partition.part_count + 2);
    valid += check_assignment(inst, res.assignment).valid();
  }
  CHECK(valid >= 9);
}
