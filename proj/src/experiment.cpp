#include "lll/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "lll/defective_coloring.hpp"
#include "lll/edge_coloring.hpp"
#include "lll/errors.hpp"
#include "lll/general_lll.hpp"
#include "lll/generators.hpp"
#include "lll/light_partition.hpp"
#include "lll/resilient_solver.hpp"
#include "lll/rng.hpp"

namespace lll {

namespace {

template <class T>
T param(const nlohmann::json& params, const char* key) {
  if (!params.contains(key)) throw InputError(std::string("missing parameter '") + key + "'");
  try {
    return params.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw InputError(std::string("parameter '") + key + "' has the wrong type");
  }
}

template <class T>
T param_or(const nlohmann::json& params, const char* key, T fallback) {
  return params.contains(key) ? param<T>(params, key) : fallback;
}

const Graph& need_graph(const Generated& g, const std::string& algorithm) {
  if (const auto* graph = std::get_if<Graph>(&g)) return *graph;
  throw InputError("algorithm '" + algorithm + "' needs a graph generator");
}

const LllInstance& need_instance(const Generated& g, const std::string& algorithm) {
  if (const auto* inst = std::get_if<LllInstance>(&g)) return *inst;
  throw InputError("algorithm '" + algorithm + "' needs an instance generator");
}

void fill_stage(RunRecord& rec, const StageReport& stage) {
  rec.dangerous = stage.dangerous_events.size();
  rec.reverted = stage.reverted;
  rec.deferred = stage.deferred;
  for (std::size_t size : stage.residual_components) {
    ++rec.component_histogram[size];
    rec.max_component = std::max(rec.max_component, size);
  }
}

}  // namespace

Generated generate(const GeneratorSpec& spec, std::uint64_t seed) {
  const auto& p = spec.params;
  if (spec.family == "regular") {
    return random_regular(param<std::size_t>(p, "n"), param<std::size_t>(p, "d"), seed);
  }
  if (spec.family == "gnp") return gnp(param<std::size_t>(p, "n"), param<double>(p, "p"), seed);
  if (spec.family == "count_threshold") {
    CountThresholdParams params;
    if (p.contains("p")) {
      params = count_threshold_params_for(param<std::size_t>(p, "events"), param<double>(p, "p"));
    } else {
      params.events = param_or<std::size_t>(p, "events", params.events);
      params.k = param_or<std::size_t>(p, "k", params.k);
      params.m = param_or<int>(p, "m", params.m);
      params.t = param_or<int>(p, "t", params.t);
    }
    return count_threshold_family(params, seed);
  }
  if (spec.family == "ksat") {
    return random_ksat(param<std::size_t>(p, "vars"), param<std::size_t>(p, "clauses"), param<std::size_t>(p, "k"),
                       seed);
  }
  throw InputError("unknown generator family '" + spec.family + "'");
}

ExperimentSpec spec_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  try {
    const auto& gen = j.at("generator");
    spec.generator.family = gen.at("family").get<std::string>();
    spec.generator.params = gen.value("params", nlohmann::json::object());
    if (j.contains("seeds")) {
      const auto& s = j.at("seeds");
      if (s.is_array()) {
        for (const auto& v : s) spec.seeds.push_back(v.get<std::uint64_t>());
      } else {
        const auto from = s.value("from", std::uint64_t{0});
        const auto count = s.at("count").get<std::uint64_t>();
        for (std::uint64_t i = 0; i < count; ++i) spec.seeds.push_back(from + i);
      }
    }
    if (j.contains("constants")) {
      const auto& c = j.at("constants");
      if (c.is_string()) spec.cfg = load_constants(c.get<std::string>());
      else c.get_to(spec.cfg);
    }
    spec.algorithm = j.at("algorithm").get<std::string>();
    spec.algorithm_params = j.value("params", nlohmann::json::object());
    spec.output_path = j.value("output", std::string());
    spec.workers = j.value("workers", std::size_t{1});
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed experiment spec: ") + e.what());
  }
  spec.cfg.validate();
  return spec;
}

nlohmann::json to_json(const ExperimentSpec& spec) {
  return {{"generator", {{"family", spec.generator.family}, {"params", spec.generator.params}}},
          {"seeds", spec.seeds},
          {"constants", spec.cfg},
          {"algorithm", spec.algorithm},
          {"params", spec.algorithm_params},
          {"output", spec.output_path},
          {"workers", spec.workers}};
}

std::string spec_hash(const ExperimentSpec& spec) {
  const nlohmann::json key{{"generator", {{"family", spec.generator.family}, {"params", spec.generator.params}}},
                           {"constants", spec.cfg},
                           {"algorithm", spec.algorithm},
                           {"params", spec.algorithm_params}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(key.dump())));
  return buf;
}

namespace {

// max component / (d^10 log2 n): the fitted constant of the component-size bound.
double component_ratio(std::size_t max_component, const LllInstance& inst) {
  const double d = static_cast<double>(std::max<std::size_t>(inst.d(), 2));
  const double n = static_cast<double>(std::max<std::size_t>(inst.event_count(), 2));
  return static_cast<double>(max_component) / (std::pow(d, 10) * std::log2(n));
}

}  // namespace

RunRecord run_one(const ExperimentSpec& spec, std::uint64_t seed) {
  RunRecord rec;
  rec.spec_hash = spec_hash(spec);
  rec.seed = seed;
  const auto start = std::chrono::steady_clock::now();
  try {
    const Generated gen = generate(spec.generator, seed);
    const std::uint64_t algo_seed = derive_seed(seed, "algorithm");
    const auto& p = spec.algorithm_params;
    const auto& algo = spec.algorithm;
    if (algo == "resilient") {
      const auto& inst = need_instance(gen, algo);
      const auto parts = param_or<std::size_t>(p, "parts", 1);
      if (parts == 0) throw InputError("parts must be positive");
      Partition part{parts, std::vector<std::int32_t>(inst.event_count())};
      for (std::size_t a = 0; a < inst.event_count(); ++a) part.assignment[a] = static_cast<std::int32_t>(a % parts);
      const SolveResult res = solve(inst, part, spec.cfg, algo_seed);
      fill_stage(rec, res.stage);
      rec.rounds = res.stage.rounds_used;
      rec.valid = check_assignment(inst, res.assignment).valid();
      rec.detail = {{"iterations", res.stage.iterations},
                    {"post_components", res.post.components.size()},
                    {"resamplings", res.post.total_resamplings()},
                    {"component_ratio", component_ratio(rec.max_component, inst)}};
    } else if (algo == "general") {
      const auto& inst = need_instance(gen, algo);
      const auto r = p.contains("r") ? param<std::size_t>(p, "r") : preset_r(inst, RPreset::Polynomial);
      const GeneralResult res = solve_general(inst, r, spec.cfg, algo_seed);
      fill_stage(rec, res.solve.stage);
      rec.rounds = res.partition_rounds + res.solve.stage.rounds_used;
      rec.valid = check_assignment(inst, res.assignment).valid();
      rec.detail = {{"r", r},
                    {"partition_rounds", res.partition_rounds},
                    {"criterion_pass", res.criterion.pass},
                    {"certificate_pass", res.certificate.pass},
                    {"warnings", res.warnings.size()},
                    {"component_ratio", component_ratio(rec.max_component, inst)}};
    } else if (algo == "partition") {
      const auto& g = need_graph(gen, algo);
      const double x = param_or<double>(p, "x", std::max(1.0, log2_degree(g.max_degree())));
      const LightPartitionResult res = compute_light_partition(g, x, spec.cfg, algo_seed);
      if (res.solve) {
        fill_stage(rec, res.solve->stage);
        rec.rounds = res.solve->stage.rounds_used;
      }
      std::size_t worst = 0;
      for (std::size_t v = 0; v < g.node_count(); ++v) {
        for (std::size_t c : per_part_neighbor_counts(g, res.partition, static_cast<NodeId>(v))) worst = std::max(worst, c);
      }
      rec.valid = static_cast<double>(worst) <= res.per_part_bound;
      rec.detail = {{"parts", res.partition.part_count}, {"max_per_part", worst}, {"bound", res.per_part_bound}};
    } else if (algo == "defective") {
      const auto& g = need_graph(gen, algo);
      const ColoringKind kind = parse_kind(param_or<std::string>(p, "kind", "vertex"));
      const HalvingResult res = iterate_halving(g, kind, param_or<double>(p, "q", 2.0), spec.cfg, algo_seed);
      const std::size_t measured = max_defect(g, kind, res.coloring.colors);
      rec.valid = static_cast<double>(measured) < res.coloring.defect_bound;
      rec.detail = {{"colors", res.coloring.color_count},
                    {"final_defect", measured},
                    {"bound", res.coloring.defect_bound}};
    } else if (algo == "edgecolor") {
      const auto& g = need_graph(gen, algo);
      double eps = 0.0;
      if (!p.contains("eps") || (p.at("eps").is_string() && p.at("eps").get<std::string>() == "minimal")) {
        eps = minimal_admissible_epsilon(static_cast<double>(g.max_degree()));
      } else {
        eps = param<double>(p, "eps");
      }
      EdgeColorOptions opts;
      opts.force_reduction = param_or<bool>(p, "force_reduction", false);
      const EdgeColoringResult res = color_edges(g, eps, spec.cfg, algo_seed, opts);
      const auto check = verify_edge_coloring(g, res.colors, res.total_colors);
      rec.valid = check.proper() && check.within_bound() && res.inequality_holds;
      rec.detail = {{"path", path_name(res.path)},
                    {"eps", eps},
                    {"colors_used", check.colors_used},
                    {"palette", res.total_colors}};
    } else {
      throw InputError("unknown algorithm '" + algo + "'");
    }
  } catch (const std::exception& e) {
    rec.valid = false;
    rec.error = e.what();
  }
  rec.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

nlohmann::json to_json(const RunRecord& r, bool with_wall_time) {
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [size, count] : r.component_histogram) hist[std::to_string(size)] = count;
  nlohmann::json j{{"spec_hash", r.spec_hash},
                   {"seed", r.seed},
                   {"rounds", r.rounds},
                   {"valid", r.valid},
                   {"component_histogram", hist},
                   {"max_component", r.max_component},
                   {"dangerous", r.dangerous},
                   {"reverted", r.reverted},
                   {"deferred", r.deferred},
                   {"error", r.error},
                   {"detail", r.detail}};
  if (with_wall_time) j["wall_ms"] = r.wall_ms;
  return j;
}

RunRecord record_from_json(const nlohmann::json& j) {
  RunRecord r;
  try {
    r.spec_hash = j.at("spec_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.rounds = j.at("rounds").get<std::size_t>();
    r.valid = j.at("valid").get<bool>();
    for (const auto& [size, count] : j.at("component_histogram").items()) {
      r.component_histogram[std::stoul(size)] = count.get<std::size_t>();
    }
    r.max_component = j.at("max_component").get<std::size_t>();
    r.dangerous = j.at("dangerous").get<std::size_t>();
    r.reverted = j.at("reverted").get<std::size_t>();
    r.deferred = j.at("deferred").get<std::size_t>();
    r.error = j.value("error", std::string());
    r.detail = j.value("detail", nlohmann::json::object());
    r.wall_ms = j.value("wall_ms", 0.0);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed run record: ") + e.what());
  }
  return r;
}

std::string csv_header() { return "seed,rounds,valid,max_component,dangerous,reverted,deferred,wall_ms"; }

std::string to_csv(const RunRecord& r) {
  std::ostringstream out;
  out << r.seed << ',' << r.rounds << ',' << (r.valid ? 1 : 0) << ',' << r.max_component << ',' << r.dangerous << ','
      << r.reverted << ',' << r.deferred << ',' << r.wall_ms;
  return out.str();
}

ExperimentSummary summarize(const std::vector<RunRecord>& records) {
  ExperimentSummary s;
  s.runs = records.size();
  double rounds = 0.0;
  for (const auto& r : records) {
    s.valid += r.valid;
    rounds += static_cast<double>(r.rounds);
    s.max_rounds = std::max(s.max_rounds, r.rounds);
    s.max_component = std::max(s.max_component, r.max_component);
    if (r.detail.contains("component_ratio")) {
      s.component_constant = std::max(s.component_constant, r.detail.at("component_ratio").get<double>());
    }
  }
  if (s.runs > 0) {
    s.success_rate = static_cast<double>(s.valid) / static_cast<double>(s.runs);
    s.mean_rounds = rounds / static_cast<double>(s.runs);
  }
  return s;
}

nlohmann::json to_json(const ExperimentSummary& s) {
  return {{"runs", s.runs},
          {"valid", s.valid},
          {"success_rate", s.success_rate},
          {"mean_rounds", s.mean_rounds},
          {"max_rounds", s.max_rounds},
          {"max_component", s.max_component},
          {"component_constant", s.component_constant}};
}

ExperimentResult run_experiment(const ExperimentSpec& spec, const std::function<void(const RunRecord&)>& on_record) {
  if (spec.seeds.empty()) throw InputError("experiment needs at least one seed");
  spec.cfg.validate();
  std::ofstream log;
  if (!spec.output_path.empty()) {
    log.open(spec.output_path, std::ios::app);
    if (!log) throw InputError("cannot open " + spec.output_path + " for appending");
  }
  ExperimentResult out;
  out.records.resize(spec.seeds.size());
  std::mutex writer;
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < spec.seeds.size(); i = next++) {
      RunRecord rec = run_one(spec, spec.seeds[i]);
      std::lock_guard lock(writer);
      if (log.is_open()) {
        log << to_json(rec).dump() << '\n';
        log.flush();
      }
      if (on_record) on_record(rec);
      out.records[i] = std::move(rec);
    }
  };
  const std::size_t hw = std::max(1U, std::thread::hardware_concurrency());
  const std::size_t threads = std::clamp<std::size_t>(spec.workers, 1, std::min(hw, spec.seeds.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  out.summary = summarize(out.records);
  return out;
}

}  // namespace lll
