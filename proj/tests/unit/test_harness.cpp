#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "lll/errors.hpp"
#include "lll/experiment.hpp"
#include "lll/generators.hpp"
#include "lll/probability.hpp"

using namespace lll;

TEST_CASE("random_regular is simple, regular and seeded") {
  for (auto [n, d] : std::vector<std::pair<std::size_t, std::size_t>>{{10, 3}, {50, 4}, {100, 7}, {64, 63}}) {
    const Graph g = random_regular(n, d, 3);
    CHECK(g.node_count() == n);
    CHECK(g.edge_count() == n * d / 2);
    for (std::size_t v = 0; v < n; ++v) CHECK(g.degree(static_cast<NodeId>(v)) == d);
    const auto edges = g.edges();
    CHECK(std::set<std::pair<NodeId, NodeId>>(edges.begin(), edges.end()).size() == edges.size());
  }
  CHECK(random_regular(60, 6, 9).edges() == random_regular(60, 6, 9).edges());
  CHECK(random_regular(60, 6, 9).edges() != random_regular(60, 6, 10).edges());
  CHECK_THROWS_AS(random_regular(7, 3, 1), InputError);
  CHECK_THROWS_AS(random_regular(5, 5, 1), InputError);
}

TEST_CASE("gnp edge counts") {
  CHECK(gnp(50, 0.0, 1).edge_count() == 0);
  CHECK(gnp(20, 1.0, 1).edge_count() == 190);
  const double expected = 400.0 * 399 / 2 / 256;
  const auto m = static_cast<double>(gnp(400, 1.0 / 256, 4).edge_count());
  CHECK(m > expected / 2);
  CHECK(m < expected * 2);
  CHECK(gnp(100, 0.1, 5).edges() == gnp(100, 0.1, 5).edges());
}

TEST_CASE("count threshold family") {
  CountThresholdParams params;
  CHECK(count_threshold_probability(params) == doctest::Approx(1.0 / 256));
  const auto inst = count_threshold_family(params, 2);
  CHECK(inst.event_count() == 200);
  CHECK(inst.d() <= 4);
  for (std::size_t a = 0; a < 10; ++a) {
    const auto est = event_probability(inst, static_cast<EventId>(a));
    CHECK(est.exact);
    CHECK(est.value == doctest::Approx(1.0 / 256));
  }
  const auto p = count_threshold_params_for(100, 0.01);
  CHECK(p.m == 10);
  CHECK(p.events == 100);
  const double realised = count_threshold_probability(count_threshold_params_for(100, 0.003));
  CHECK(realised <= 0.003);
  CHECK(realised > 0.0015);
}

TEST_CASE("random k-SAT meets the symmetric criterion") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto inst = random_ksat(80, 30, 5, seed);
    CHECK(symmetric_criterion(inst) <= 1.0);
    CHECK(inst.event_count() == 30);
    CHECK(inst.variable_count() <= 80);
    for (std::size_t a = 0; a < inst.event_count(); ++a) {
      CHECK(inst.event(static_cast<EventId>(a)).vars.size() == 5);
      CHECK(event_probability(inst, static_cast<EventId>(a)).value == doctest::Approx(1.0 / 32));
    }
  }
}

namespace {

ExperimentSpec small_spec() {
  ExperimentSpec spec;
  spec.generator = {"count_threshold", {{"events", 60}}};
  spec.algorithm = "resilient";
  spec.algorithm_params = {{"parts", 2}};
  for (std::uint64_t s = 1; s <= 10; ++s) spec.seeds.push_back(s);
  return spec;
}

}  // namespace

TEST_CASE("experiment rejects empty seeds and unknown algorithms") {
  auto spec = small_spec();
  spec.seeds.clear();
  CHECK_THROWS_AS(run_experiment(spec), InputError);
  auto bad = small_spec();
  bad.algorithm = "nope";
  const auto rec = run_one(bad, 1);
  CHECK_FALSE(rec.valid);
  CHECK_FALSE(rec.error.empty());
}

TEST_CASE("experiment summary recomputes from the records") {
  const auto res = run_experiment(small_spec());
  REQUIRE(res.records.size() == 10);
  std::size_t valid = 0, max_rounds = 0, max_comp = 0;
  double rounds = 0, ratio = 0;
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(res.records[i].seed == i + 1);
    valid += res.records[i].valid;
    rounds += static_cast<double>(res.records[i].rounds);
    max_rounds = std::max(max_rounds, res.records[i].rounds);
    max_comp = std::max(max_comp, res.records[i].max_component);
    ratio = std::max(ratio, res.records[i].detail.at("component_ratio").get<double>());
  }
  CHECK(res.summary.component_constant == ratio);
  CHECK(res.summary.runs == 10);
  CHECK(res.summary.valid == valid);
  CHECK(res.summary.success_rate == doctest::Approx(static_cast<double>(valid) / 10));
  CHECK(res.summary.mean_rounds == doctest::Approx(rounds / 10));
  CHECK(res.summary.max_rounds == max_rounds);
  CHECK(res.summary.max_component == max_comp);
}

TEST_CASE("experiment rounds follow the part count") {
  for (std::size_t parts : {1, 2, 4, 8}) {
    auto spec = small_spec();
    spec.algorithm_params = {{"parts", parts}};
    spec.seeds = {1, 2};
    for (const auto& r : run_experiment(spec).records) CHECK(r.rounds == 5 * parts + 2);
  }
}

TEST_CASE("experiment JSONL round trip and reproducibility") {
  const auto dir = std::filesystem::temp_directory_path() / "lll_harness_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "records.jsonl";
  std::filesystem::remove(path);
  auto spec = small_spec();
  spec.output_path = path.string();
  spec.workers = 3;
  const auto res = run_experiment(spec);
  std::ifstream in(path);
  std::string line;
  std::vector<RunRecord> read;
  while (std::getline(in, line)) read.push_back(record_from_json(nlohmann::json::parse(line)));
  REQUIRE(read.size() == 10);
  std::sort(read.begin(), read.end(), [](const RunRecord& a, const RunRecord& b) { return a.seed < b.seed; });
  for (std::size_t i = 0; i < 10; ++i) CHECK(to_json(read[i], false) == to_json(res.records[i], false));

  auto serial = small_spec();
  const auto again = run_experiment(serial);
  for (std::size_t i = 0; i < 10; ++i) CHECK(to_json(again.records[i], false) == to_json(res.records[i], false));
  CHECK(spec_hash(serial) == spec_hash(spec));
  serial.cfg = ThresholdConfig::paper();
  CHECK(spec_hash(serial) != spec_hash(spec));
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment spec JSON") {
  const auto j = nlohmann::json::parse(
      R"({"generator":{"family":"regular","params":{"n":40,"d":16}},"seeds":{"from":5,"count":3},)"
      R"("constants":"relaxed","algorithm":"defective","params":{"kind":"edge","q":2}})");
  const auto spec = spec_from_json(j);
  CHECK(spec.seeds == std::vector<std::uint64_t>{5, 6, 7});
  CHECK(spec.algorithm == "defective");
  CHECK(spec_from_json(to_json(spec)).seeds == spec.seeds);
  CHECK(spec_hash(spec_from_json(to_json(spec))) == spec_hash(spec));
  CHECK_THROWS_AS(spec_from_json(nlohmann::json::parse(R"({"seeds":[1]})")), InputError);
  const auto rec = run_one(spec, 5);
  CHECK(rec.valid);
}

TEST_CASE("csv rows match the header") {
  const auto rec = run_one(small_spec(), 1);
  const auto header = csv_header();
  const auto row = to_csv(rec);
  CHECK(std::count(header.begin(), header.end(), ',') == std::count(row.begin(), row.end(), ','));
  CHECK(row.rfind("1,", 0) == 0);
}
