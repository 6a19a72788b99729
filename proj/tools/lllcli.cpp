#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/defective_coloring.hpp"
#include "lll/edge_coloring.hpp"
#include "lll/errors.hpp"
#include "lll/experiment.hpp"
#include "lll/general_lll.hpp"
#include "lll/graph.hpp"
#include "lll/instance_io.hpp"
#include "lll/light_partition.hpp"
#include "lll/resilient_solver.hpp"

using nlohmann::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  std::string constants = "strict";
  std::size_t mc_samples = 0;
  std::string format = "json";
  std::string out;
};

lll::ThresholdConfig config_of(const Globals& g) {
  auto cfg = lll::load_constants(g.constants);
  if (g.mc_samples > 0) cfg.mc_samples = g.mc_samples;
  cfg.validate();
  return cfg;
}

void emit(const Globals& g, const json& j) {
  if (g.out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream f(g.out);
  if (!f) throw lll::InputError("cannot write " + g.out);
  f << j.dump(2) << '\n';
}

void emit_csv(const Globals& g, const std::vector<std::string>& lines) {
  std::ofstream file;
  if (!g.out.empty()) {
    file.open(g.out);
    if (!file) throw lll::InputError("cannot write " + g.out);
  }
  std::ostream& os = g.out.empty() ? std::cout : file;
  for (const auto& line : lines) os << line << '\n';
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw lll::InputError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw lll::InputError(path + ": " + e.what());
  }
}

// key=value parameters; values parse as JSON when possible.
json parse_params(const std::vector<std::string>& items) {
  json params = json::object();
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw lll::InputError("parameter '" + item + "' is not key=value");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    try {
      params[key] = json::parse(value);
    } catch (const json::exception&) {
      params[key] = value;
    }
  }
  return params;
}

std::string stage_csv(std::uint64_t seed, const lll::StageReport& s, bool valid) {
  const std::size_t max_component = s.residual_components.empty() ? 0 : s.residual_components.front();
  return std::to_string(seed) + ',' + std::to_string(s.rounds_used) + ',' + (valid ? "1" : "0") + ',' +
         std::to_string(max_component) + ',' + std::to_string(s.dangerous_events.size()) + ',' +
         std::to_string(s.reverted) + ',' + std::to_string(s.deferred) + ",0";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed LLL toolkit: solvers, partitions, colorings and experiments"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed");
  app.add_option("--constants", g.constants, "strict | relaxed | path to a JSON constants file");
  app.add_option("--mc-samples", g.mc_samples, "Override Monte Carlo sample count");
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  app.add_option("-o,--out", g.out, "Write output to a file");

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a graph or an LLL instance");
  std::string family;
  std::vector<std::string> gen_params;
  gen->add_option("family", family, "regular | gnp | count_threshold | ksat")->required();
  gen->add_option("params", gen_params, "key=value parameters");

  // solve-resilient
  auto* sres = app.add_subcommand("solve-resilient", "Run the resilient solver with a given partition");
  std::string instance_path;
  std::size_t parts = 1;
  std::string partition_path;
  bool locality = false;
  sres->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  sres->add_option("--parts", parts, "Round-robin partition into this many parts");
  sres->add_option("--partition", partition_path, "JSON array with the part of each event")->check(CLI::ExistingFile);
  sres->add_flag("--check-locality", locality, "Re-derive each decision from its local view");

  // solve-general
  auto* sgen = app.add_subcommand("solve-general", "Light partition, certificate and resilient solver");
  std::size_t r = 0;
  std::string preset;
  sgen->add_option("instance", instance_path, "Instance JSON")->required()->check(CLI::ExistingFile);
  sgen->add_option("-r", r, "Round parameter");
  sgen->add_option("--preset", preset, "polynomial | subexponential")
      ->check(CLI::IsMember({"polynomial", "subexponential"}));

  // partition
  auto* part_cmd = app.add_subcommand("partition", "x-light partition of a graph");
  std::string graph_path;
  double x = 0.0;
  part_cmd->add_option("graph", graph_path, "Edge list")->required()->check(CLI::ExistingFile);
  part_cmd->add_option("-x", x, "Lightness (defaults to log2 of the max degree)");

  // defective
  auto* def = app.add_subcommand("defective", "Defective vertex or edge coloring by iterated halving");
  std::string kind = "vertex";
  double q = 2.0;
  std::string policy = "auto";
  def->add_option("graph", graph_path, "Edge list")->required()->check(CLI::ExistingFile);
  def->add_option("--kind", kind)->check(CLI::IsMember({"vertex", "edge"}));
  def->add_option("-q", q, "Defect parameter");
  def->add_option("--policy", policy)->check(CLI::IsMember({"auto", "lll", "balance"}));

  // edgecolor
  auto* ec = app.add_subcommand("edgecolor", "(1+eps)Delta proper edge coloring");
  std::string eps_text = "minimal";
  bool force = false;
  ec->add_option("graph", graph_path, "Edge list")->required()->check(CLI::ExistingFile);
  ec->add_option("--eps", eps_text, "Number, 'minimal' or 'delta-o-delta'");
  ec->add_flag("--force-reduction", force, "Use the bucket reduction even outside its admissible range");

  // check
  auto* chk = app.add_subcommand("check", "Validate an assignment or an edge coloring");
  std::string assignment_path;
  std::string coloring_path;
  std::size_t palette = 0;
  chk->add_option("--instance", instance_path)->check(CLI::ExistingFile);
  chk->add_option("--assignment", assignment_path)->check(CLI::ExistingFile);
  chk->add_option("--graph", graph_path)->check(CLI::ExistingFile);
  chk->add_option("--coloring", coloring_path, "JSON array of edge colors")->check(CLI::ExistingFile);
  chk->add_option("--palette", palette, "Palette bound (defaults to max color + 1)");

  // experiment
  auto* exp = app.add_subcommand("experiment", "Seed sweep from a JSON spec");
  std::string spec_path;
  std::string records_path;
  exp->add_option("spec", spec_path, "Experiment spec JSON")->required()->check(CLI::ExistingFile);
  exp->add_option("--records", records_path, "Append JSONL records here (overrides the spec)");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto cfg = config_of(g);
    if (*gen) {
      const auto made = lll::generate({family, parse_params(gen_params)}, g.seed);
      if (const auto* graph = std::get_if<lll::Graph>(&made)) {
        if (g.out.empty()) {
          lll::write_edge_list(std::cout, *graph);
        } else {
          std::ofstream f(g.out);
          lll::write_edge_list(f, *graph);
        }
      } else {
        emit(g, lll::instance_to_json(std::get<lll::LllInstance>(made)));
      }
    } else if (*sres) {
      const auto inst = lll::read_instance_file(instance_path);
      lll::Partition partition{parts, std::vector<std::int32_t>(inst.event_count())};
      if (!partition_path.empty()) {
        const auto arr = read_json_file(partition_path).get<std::vector<std::int32_t>>();
        std::int32_t top = 0;
        for (auto p : arr) top = std::max(top, p);
        partition = lll::Partition{static_cast<std::size_t>(top) + 1, arr};
      } else {
        if (parts == 0) throw lll::InputError("--parts must be positive");
        for (std::size_t a = 0; a < inst.event_count(); ++a) {
          partition.assignment[a] = static_cast<std::int32_t>(a % parts);
        }
      }
      lll::SolverOptions opts;
      opts.check_locality = locality;
      const auto res = lll::solve(inst, partition, cfg, g.seed, opts);
      const bool valid = lll::check_assignment(inst, res.assignment).valid();
      if (g.format == "csv") {
        emit_csv(g, {lll::csv_header(), stage_csv(g.seed, res.stage, valid)});
      } else {
        emit(g, {{"valid", valid},
                 {"assignment", lll::assignment_to_json(res.assignment)},
                 {"stage", lll::to_json(res.stage)},
                 {"fate", lll::fate_map_json(res.stage.fate)},
                 {"post", lll::to_json(res.post)}});
      }
    } else if (*sgen) {
      const auto inst = lll::read_instance_file(instance_path);
      std::size_t rr = r;
      if (!preset.empty()) {
        rr = lll::preset_r(inst, preset == "polynomial" ? lll::RPreset::Polynomial : lll::RPreset::Subexponential);
      }
      if (rr == 0) rr = lll::preset_r(inst, lll::RPreset::Polynomial);
      const auto res = lll::solve_general(inst, rr, cfg, g.seed);
      const bool valid = lll::check_assignment(inst, res.assignment).valid();
      if (g.format == "csv") {
        emit_csv(g, {lll::csv_header(), stage_csv(g.seed, res.solve.stage, valid)});
      } else {
        json j = lll::to_json(res);
        j["valid"] = valid;
        j["assignment"] = lll::assignment_to_json(res.assignment);
        emit(g, j);
      }
    } else if (*part_cmd) {
      const auto graph = lll::read_edge_list_file(graph_path);
      const double lightness = x > 0 ? x : std::max(1.0, lll::log2_degree(graph.max_degree()));
      const auto res = lll::compute_light_partition(graph, lightness, cfg, g.seed);
      std::size_t worst = 0;
      for (std::size_t v = 0; v < graph.node_count(); ++v) {
        for (auto c : lll::per_part_neighbor_counts(graph, res.partition, static_cast<lll::NodeId>(v))) {
          worst = std::max(worst, c);
        }
      }
      json j{{"x", lightness},
             {"parts", res.partition.part_count},
             {"partition", lll::partition_json(res.partition)},
             {"max_per_part", worst},
             {"per_part_bound", res.per_part_bound},
             {"short_circuit", res.short_circuit}};
      if (res.solve) j["stage"] = lll::to_json(res.solve->stage);
      emit(g, j);
    } else if (*def) {
      const auto graph = lll::read_edge_list_file(graph_path);
      const lll::SplitPolicy pol = policy == "lll"       ? lll::SplitPolicy::ForceLll
                                   : policy == "balance" ? lll::SplitPolicy::ForceBalance
                                                         : lll::SplitPolicy::Auto;
      const auto res = lll::iterate_halving(graph, lll::parse_kind(kind), q, cfg, g.seed, pol);
      json j = lll::to_json(res);
      json colors = json::object();
      if (res.coloring.kind == lll::ColoringKind::Vertex) {
        for (std::size_t v = 0; v < res.coloring.colors.size(); ++v) colors[std::to_string(v)] = res.coloring.colors[v];
      } else {
        const auto edges = graph.edges();
        for (std::size_t e = 0; e < edges.size(); ++e) {
          colors[std::to_string(edges[e].first) + "-" + std::to_string(edges[e].second)] = res.coloring.colors[e];
        }
      }
      j["colors"] = colors;
      const std::size_t defect = lll::max_defect(graph, res.coloring.kind, res.coloring.colors);
      j["verification"] = {{"max_defect", defect},
                           {"defect_bound", res.coloring.defect_bound},
                           {"within_bound", static_cast<double>(defect) < res.coloring.defect_bound}};
      emit(g, j);
    } else if (*ec) {
      const auto graph = lll::read_edge_list_file(graph_path);
      double eps = 0.0;
      if (eps_text == "minimal") {
        eps = lll::minimal_admissible_epsilon(static_cast<double>(std::max<std::size_t>(1, graph.max_degree())));
      } else if (eps_text == "delta-o-delta") {
        eps = lll::delta_o_delta_epsilon(graph.node_count());
      } else {
        try {
          eps = std::stod(eps_text);
        } catch (const std::exception&) {
          throw lll::InputError("--eps must be a number, 'minimal' or 'delta-o-delta'");
        }
      }
      lll::EdgeColorOptions opts;
      opts.force_reduction = force;
      const auto res = lll::color_edges(graph, eps, cfg, g.seed, opts);
      json j = lll::to_json(res);
      j["epsilon"] = eps;
      j["colors"] = res.colors;
      emit(g, j);
    } else if (*chk) {
      if (!instance_path.empty() && !assignment_path.empty()) {
        const auto inst = lll::read_instance_file(instance_path);
        const auto a = lll::assignment_from_json(read_json_file(assignment_path), inst.variable_count());
        const auto report = lll::check_assignment(inst, a);
        emit(g, {{"valid", report.valid()}, {"violated_events", report.violated_events}});
        return report.valid() ? 0 : 1;
      }
      if (!graph_path.empty() && !coloring_path.empty()) {
        const auto graph = lll::read_edge_list_file(graph_path);
        const auto colors = read_json_file(coloring_path).get<std::vector<int>>();
        std::size_t bound = palette;
        if (bound == 0) {
          for (int c : colors) bound = std::max(bound, static_cast<std::size_t>(std::max(c, 0)) + 1);
        }
        const auto report = lll::verify_edge_coloring(graph, colors, bound);
        emit(g, lll::to_json(report));
        return report.proper() && report.within_bound() ? 0 : 1;
      }
      throw lll::InputError("check needs --instance with --assignment, or --graph with --coloring");
    } else if (*exp) {
      auto spec = lll::spec_from_json(read_json_file(spec_path));
      if (!records_path.empty()) spec.output_path = records_path;
      if (app.get_option("--constants")->count() > 0 || g.mc_samples > 0) spec.cfg = cfg;
      const auto res = lll::run_experiment(spec);
      if (g.format == "csv") {
        std::vector<std::string> lines{lll::csv_header()};
        for (const auto& rec : res.records) lines.push_back(lll::to_csv(rec));
        emit_csv(g, lines);
      } else {
        emit(g, {{"spec_hash", lll::spec_hash(spec)}, {"summary", lll::to_json(res.summary)}});
      }
    }
  } catch (const lll::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
