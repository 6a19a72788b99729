#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"

namespace lll {

// family: "regular" {n, d} | "gnp" {n, p} | "count_threshold" {events, k, m, t}
//         or {events, p} | "ksat" {vars, clauses, k}
struct GeneratorSpec {
  std::string family;
  nlohmann::json params = nlohmann::json::object();
};

using Generated = std::variant<Graph, LllInstance>;

Generated generate(const GeneratorSpec& spec, std::uint64_t seed);

// algorithm: "resilient" {parts} | "general" {r} | "partition" {x}
//            | "defective" {kind, q} | "edgecolor" {eps | "minimal"}
struct ExperimentSpec {
  GeneratorSpec generator;
  std::vector<std::uint64_t> seeds;
  ThresholdConfig cfg = ThresholdConfig::relaxed();
  std::string algorithm;
  nlohmann::json algorithm_params = nlohmann::json::object();
  std::string output_path;  // JSONL; empty disables persistence
  std::size_t workers = 1;
};

ExperimentSpec spec_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentSpec& spec);

// Hash over the generator, configuration and algorithm (not seeds, output
// path or worker count).
std::string spec_hash(const ExperimentSpec& spec);

struct RunRecord {
  std::string spec_hash;
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  bool valid = false;
  std::map<std::size_t, std::size_t> component_histogram;  // size -> count
  std::size_t max_component = 0;
  std::size_t dangerous = 0, reverted = 0, deferred = 0;
  double wall_ms = 0.0;
  std::string error;
  nlohmann::json detail = nlohmann::json::object();
};

RunRecord run_one(const ExperimentSpec& spec, std::uint64_t seed);

nlohmann::json to_json(const RunRecord& r, bool with_wall_time = true);
RunRecord record_from_json(const nlohmann::json& j);

std::string csv_header();
std::string to_csv(const RunRecord& r);

struct ExperimentSummary {
  std::size_t runs = 0;
  std::size_t valid = 0;
  double success_rate = 0.0;
  double mean_rounds = 0.0;
  std::size_t max_rounds = 0;
  std::size_t max_component = 0;
  // Largest max_component / (d^10 log2 n) over solver runs; reported, not asserted.
  double component_constant = 0.0;
};

ExperimentSummary summarize(const std::vector<RunRecord>& records);
nlohmann::json to_json(const ExperimentSummary& s);

struct ExperimentResult {
  std::vector<RunRecord> records;  // in seed order
  ExperimentSummary summary;
};

// Runs every seed on a bounded worker pool. Records are appended to
// spec.output_path one line each as runs finish. `on_record` is called under
// the writer lock.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                const std::function<void(const RunRecord&)>& on_record = {});

}  // namespace lll
