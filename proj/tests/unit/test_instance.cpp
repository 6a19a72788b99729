#include <doctest.h>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "lll/config.hpp"
#include "lll/errors.hpp"
#include "lll/instance.hpp"
#include "lll/instance_io.hpp"
#include "lll/predicate.hpp"
#include "lll/randomness_table.hpp"
#include "lll/search.hpp"

using namespace lll;

namespace {

// Naive reading of each predicate kind, used as an oracle for the compiled form.
bool naive_count(const CountThreshold& p, const std::vector<VarId>& vars, const std::vector<int>& local) {
  auto value_of = [&](VarId v) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == v) return local[i];
    }
    return -1;
  };
  const int ref = p.reference_var ? value_of(*p.reference_var) : p.reference_value;
  for (const auto& group : p.groups) {
    int count = 0;
    for (VarId v : group) count += value_of(v) == ref;
    if (count >= std::ceil(p.threshold - 1e-9)) return true;
  }
  return false;
}

bool naive_load(const MaxPartLoad& p, const std::vector<VarId>& vars, const std::vector<int>& local) {
  std::map<int, int> count;
  for (VarId v : p.vars) {
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == v) ++count[local[i]];
    }
  }
  for (const auto& [value, c] : count) {
    if (c >= std::ceil(p.threshold - 1e-9)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("count_threshold rounds a real threshold up") {
  CHECK(count_threshold(2.0) == 2);
  CHECK(count_threshold(2.1) == 3);
  CHECK(count_threshold(0.5) == 1);
}

TEST_CASE("compiled CountThreshold agrees with the naive reading") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(5);
    std::vector<VarId> vars;
    std::vector<int> domains;
    for (std::size_t i = 0; i < n; ++i) {
      vars.push_back(static_cast<VarId>(i * 3 + 1));
      domains.push_back(2 + static_cast<int>(rng.below(2)));
    }
    CountThreshold p;
    if (rng.below(2)) p.reference_var = vars[0];
    else p.reference_value = static_cast<int>(rng.below(2));
    const std::size_t groups = 1 + rng.below(2);
    for (std::size_t gi = 0; gi < groups; ++gi) {
      p.groups.emplace_back();
      for (std::size_t i = 0; i < n; ++i) {
        if (rng.below(2)) p.groups.back().push_back(vars[i]);
      }
    }
    p.threshold = 0.5 + static_cast<double>(rng.below(3));
    const auto compiled = CompiledPredicate::compile(p, vars, domains);
    std::vector<int> local(n, 0);
    for (int rep = 0; rep < 30; ++rep) {
      for (std::size_t i = 0; i < n; ++i) local[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(domains[i])));
      CHECK(compiled.evaluate(local) == naive_count(p, vars, local));
    }
  }
}

TEST_CASE("compiled MaxPartLoad agrees with the naive reading") {
  Rng rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng.below(6);
    std::vector<VarId> vars;
    std::vector<int> domains;
    for (std::size_t i = 0; i < n; ++i) {
      vars.push_back(static_cast<VarId>(i));
      domains.push_back(3);
    }
    MaxPartLoad p;
    for (std::size_t i = 1; i < n; ++i) p.vars.push_back(vars[i]);
    p.threshold = 1.0 + static_cast<double>(rng.below(3));
    const auto compiled = CompiledPredicate::compile(p, vars, domains);
    std::vector<int> local(n);
    for (int rep = 0; rep < 30; ++rep) {
      for (auto& x : local) x = static_cast<int>(rng.below(3));
      CHECK(compiled.evaluate(local) == naive_load(p, vars, local));
    }
  }
}

TEST_CASE("satisfiable matches exhaustive completion") {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const LllInstance inst = testing::random_table_instance(5, 3, 3, 0.3, 100 + trial);
    for (std::size_t a = 0; a < inst.event_count(); ++a) {
      const auto& pred = inst.predicate(static_cast<EventId>(a));
      const std::size_t k = inst.event(static_cast<EventId>(a)).vars.size();
      std::vector<int> partial(k);
      for (auto& x : partial) x = static_cast<int>(rng.below(3)) - 1;
      bool any = false;
      std::vector<int> full(k);
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << k); ++code) {
        bool consistent = true;
        for (std::size_t i = 0; i < k; ++i) {
          full[i] = static_cast<int>(code >> i & 1U);
          if (partial[i] >= 0 && partial[i] != full[i]) consistent = false;
        }
        if (consistent && pred.evaluate(full)) any = true;
      }
      CHECK(pred.satisfiable(partial, [](int, int) { return true; }) == any);
    }
  }
}

TEST_CASE("build_instance validation") {
  auto var = [](VarId id) { return VariableSpec::uniform(id, 2); };
  EventSpec ev{0, {0}, TruthTable{{{1}}}};
  SUBCASE("non-dense variable ids") {
    CHECK_THROWS_AS(build_instance({VariableSpec::uniform(1, 2)}, {ev}), InputError);
  }
  SUBCASE("missing variable") {
    EventSpec bad{0, {3}, TruthTable{{{1}}}};
    CHECK_THROWS_AS(build_instance({var(0)}, {bad}), InputError);
  }
  SUBCASE("duplicate dependent variable") {
    EventSpec bad{0, {0, 0}, TruthTable{{{1, 1}}}};
    CHECK_THROWS_AS(build_instance({var(0)}, {bad}), InputError);
  }
  SUBCASE("weights off by more than the tolerance") {
    VariableSpec v{0, 2, {0.5, 0.6}};
    CHECK_THROWS_AS(build_instance({v}, {ev}), InputError);
  }
  SUBCASE("negative weight") {
    VariableSpec v{0, 2, {1.5, -0.5}};
    CHECK_THROWS_AS(build_instance({v}, {ev}), InputError);
  }
  SUBCASE("allocation to a non-dependent event") {
    EventSpec e1{1, {1}, TruthTable{{{1}}}};
    CHECK_THROWS_AS(build_instance({var(0), var(1)}, {ev, e1}, Allocation{{1, 1}}), InputError);
  }
  SUBCASE("unreferenced variable") {
    CHECK_THROWS_AS(build_instance({var(0), var(1)}, {ev}), InputError);
  }
  SUBCASE("empty event that always holds") {
    EventSpec always{0, {}, TruthTable{{{}}}};
    CHECK_THROWS_AS(build_instance({}, {always}), InputError);
  }
}

TEST_CASE("default allocation picks the lowest-id dependent event") {
  EventSpec e0{0, {0, 1}, TruthTable{{{1, 1}}}};
  EventSpec e1{1, {1, 2}, TruthTable{{{1, 1}}}};
  const auto inst = build_instance({VariableSpec::uniform(0, 2), VariableSpec::uniform(1, 2), VariableSpec::uniform(2, 2)},
                                   {e0, e1});
  CHECK(inst.owner(0) == 0);
  CHECK(inst.owner(1) == 0);
  CHECK(inst.owner(2) == 1);
  CHECK(inst.d() == 1);
  CHECK(inst.d_vars() == 1);
}

TEST_CASE("degree relation d_vars <= d <= d_vars^2 + d_vars on random instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const auto inst = testing::random_table_instance(12, 10, 3, 0.2, seed);
    const auto dv = inst.d_vars();
    CHECK(dv <= inst.d());
    CHECK(inst.d() <= dv * dv + dv);
    // Both graphs agree with their definitions.
    for (std::size_t a = 0; a < inst.event_count(); ++a) {
      for (std::size_t b = 0; b < inst.event_count(); ++b) {
        if (a == b) continue;
        bool share = false;
        bool alloc = false;
        for (VarId v : inst.event(static_cast<EventId>(a)).vars) {
          const auto& bv = inst.event(static_cast<EventId>(b)).vars;
          if (std::find(bv.begin(), bv.end(), v) != bv.end()) {
            share = true;
            if (inst.owner(v) == static_cast<EventId>(a) || inst.owner(v) == static_cast<EventId>(b)) alloc = true;
          }
        }
        CHECK(inst.dep_graph().has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)) == share);
        CHECK(inst.alloc_graph().has_edge(static_cast<NodeId>(a), static_cast<NodeId>(b)) == alloc);
      }
    }
  }
}

TEST_CASE("check_assignment lists exactly the events that hold") {
  const auto inst = testing::random_table_instance(8, 6, 3, 0.3, 5);
  Rng rng(9);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int> a(8);
    for (auto& x : a) x = static_cast<int>(rng.below(2));
    const auto report = check_assignment(inst, a);
    std::vector<EventId> expect;
    for (std::size_t e = 0; e < inst.event_count(); ++e) {
      const auto& ev = inst.event(static_cast<EventId>(e));
      std::vector<int> row;
      for (VarId v : ev.vars) row.push_back(a[static_cast<std::size_t>(v)]);
      const auto& rows = std::get<TruthTable>(ev.predicate).satisfying;
      if (std::find(rows.begin(), rows.end(), row) != rows.end()) expect.push_back(static_cast<EventId>(e));
    }
    CHECK(report.violated_events == expect);
  }
  std::vector<int> partial(8, 0);
  partial[3] = -1;
  CHECK_THROWS_AS(check_assignment(inst, partial), InputError);
  std::vector<int> wide(8, 0);
  wide[0] = 2;
  CHECK_THROWS_AS(check_assignment(inst, wide), InputError);
}

TEST_CASE("instance JSON round trip preserves semantics") {
  const auto inst = testing::random_table_instance(7, 5, 3, 0.25, 21);
  const auto back = instance_from_json(instance_to_json(inst));
  REQUIRE(back.event_count() == inst.event_count());
  REQUIRE(back.variable_count() == inst.variable_count());
  testing::for_each_assignment(inst, [&](const std::vector<int>& a, double) {
    for (std::size_t e = 0; e < inst.event_count(); ++e) {
      CHECK(back.holds(static_cast<EventId>(e), a) == inst.holds(static_cast<EventId>(e), a));
    }
  });
  for (std::size_t v = 0; v < inst.variable_count(); ++v) CHECK(back.owner(static_cast<VarId>(v)) == inst.owner(static_cast<VarId>(v)));
}

TEST_CASE("instance JSON accepts fractions and CountThreshold groups") {
  const auto j = nlohmann::json::parse(R"({
    "variables": [{"id": 0, "domain": 3, "weights": ["1/3", "1/3", "1/3"]},
                  {"id": 1, "domain": 3}, {"id": 2, "domain": 3}],
    "events": [{"id": 0, "vars": [0, 1, 2],
                "predicate": {"kind": "CountThreshold",
                              "params": {"reference_var": 0, "groups": [[1, 2]], "threshold": 2}}}]
  })");
  const auto inst = instance_from_json(j);
  CHECK(inst.variable(0).weights[0] == doctest::Approx(1.0 / 3));
  CHECK(inst.holds(0, std::vector<int>{1, 1, 1}));
  CHECK_FALSE(inst.holds(0, std::vector<int>{1, 1, 2}));
  CHECK(parse_weight(nlohmann::json("3/4")) == doctest::Approx(0.75));
  CHECK_THROWS_AS(parse_weight(nlohmann::json("3/0")), InputError);
}

TEST_CASE("assignment JSON accepts objects and arrays") {
  const auto a = assignment_from_json(nlohmann::json::parse(R"({"0": 1, "2": 0, "1": 1})"), 3);
  CHECK(a == std::vector<int>{1, 1, 0});
  const auto b = assignment_from_json(nlohmann::json::parse("[0, 1, 0]"), 3);
  CHECK(b == std::vector<int>{0, 1, 0});
  CHECK(assignment_from_json(assignment_to_json(a), 3) == a);
}

TEST_CASE("threshold config presets and validation") {
  const auto paper = ThresholdConfig::paper();
  CHECK(paper.c1 == 5.5);
  CHECK(paper.c2 == 30.0);
  CHECK(paper.c3 == 3.0);
  CHECK(paper.strict);
  CHECK_NOTHROW(paper.validate());
  auto relaxed = ThresholdConfig::relaxed();
  CHECK_FALSE(relaxed.strict);
  CHECK_NOTHROW(relaxed.validate());
  relaxed.strict = true;
  CHECK_THROWS_AS(relaxed.validate(), InputError);
  CHECK(ThresholdConfig::threshold(0, 2.0) == doctest::Approx(0.25));
  CHECK(ThresholdConfig::threshold(10, 2.0) == doctest::Approx(0.01));
  nlohmann::json j = paper;
  ThresholdConfig back;
  j.get_to(back);
  CHECK(back.c2 == paper.c2);
  CHECK(back.strict == paper.strict);
}

TEST_CASE("randomness table cells depend only on seed, variable and row") {
  const auto inst = testing::random_table_instance(10, 6, 3, 0.2, 3);
  RandomnessTable t1(inst, 99);
  RandomnessTable t2(inst, 99);
  CHECK(t1.peek(4, 1) == -1);
  const int forward = t1.value(4, 1);
  CHECK(t1.materialized(4, 1));
  CHECK_FALSE(t1.materialized(4, 2));
  for (VarId v = 9; v >= 0; --v) t2.value(v, 2);
  CHECK(t2.value(4, 1) == forward);
  CHECK(RandomnessTable::cell_value(inst.variable(4), derive_seed(99, 2 * 4 + 1 - 1), 1) >= 0);
  const auto snap = t1.snapshot(1);
  CHECK(snap[4] == forward);
  CHECK(snap[0] == -1);
}

TEST_CASE("brute force solver and exhaustive search agree") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = testing::random_table_instance(8, 6, 3, 0.35, seed);
    const auto found = brute_force_solve(inst);
    bool any = false;
    testing::for_each_assignment(inst, [&](const std::vector<int>& a, double) {
      if (!any && check_assignment(inst, a).valid()) any = true;
    });
    CHECK(found.has_value() == any);
    if (found) CHECK(check_assignment(inst, *found).valid());
    std::vector<EventId> events;
    for (std::size_t e = 0; e < inst.event_count(); ++e) events.push_back(static_cast<EventId>(e));
    std::vector<VarId> vars;
    for (std::size_t v = 0; v < inst.variable_count(); ++v) vars.push_back(static_cast<VarId>(v));
    const auto dfs = exhaustive_search(inst, events, vars, Assignment(inst.variable_count(), -1));
    CHECK(dfs.has_value() == any);
  }
}
