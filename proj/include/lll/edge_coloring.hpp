#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/defective_coloring.hpp"
#include "lll/graph.hpp"

namespace lll {

// Contiguous half-open color ranges [first, second) covering [0, total_colors).
struct PaletteSplit {
  std::size_t total_colors = 0;
  std::size_t bucket_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
};

PaletteSplit split_palette(std::size_t total_colors, std::size_t bucket_count);

// (1+eps)·x - 1 >= (1+eps/2)(x + x/q) with x = c q^2 log2^4 q, in rationals.
struct ChainCheck {
  bool pass = false;
  bool exact_log = false;  // log2 q was a power of two
  std::string lhs;
  std::string rhs;
  double lhs_value = 0.0;
  double rhs_value = 0.0;
};

ChainCheck check_palette_chain(double eps, double q, double c_defect);

struct ReductionPlan {
  double epsilon = 0.0;
  double q = 0.0;
  double c_defect = 0.0;
  double bucket_degree = 0.0;  // c q^2 log^4 q + c q log^4 q
  double epsilon_prime = 0.0;
  PaletteSplit palette;
  ChainCheck chain;
  std::vector<std::string> warnings;
};

double reduction_min_epsilon(double delta);
double minimal_admissible_epsilon(double delta);
// ceil((1+eps)·delta), exactly.
std::size_t palette_size(std::size_t delta, double eps);

// Strict: precondition or chain failures throw ParameterError. Otherwise
// they are returned as warnings.
ReductionPlan plan_reduction(std::size_t delta, double eps, double c_defect, bool strict = true);

struct EdgeColoringReport {
  std::vector<std::size_t> violating_edges;  // ascending edge indices
  std::size_t conflicting_pairs = 0;
  std::vector<std::size_t> out_of_range;
  std::size_t colors_used = 0;
  std::size_t palette_bound = 0;

  bool proper() const { return violating_edges.empty(); }
  bool within_bound() const { return out_of_range.empty() && colors_used <= palette_bound; }
};

// colors are indexed like g.edges().
EdgeColoringReport verify_edge_coloring(const Graph& g, const std::vector<int>& colors, std::size_t palette_bound);

enum class EdgeColorPath { Reduction, Fallback };
std::string path_name(EdgeColorPath p);

struct BucketStats {
  std::size_t edges = 0;
  std::size_t max_degree = 0;
  std::pair<std::size_t, std::size_t> range;
};

struct EdgeColorOptions {
  bool force_reduction = false;
  SplitPolicy policy = SplitPolicy::Auto;
};

struct EdgeColoringResult {
  std::vector<int> colors;
  std::size_t total_colors = 0;
  EdgeColorPath path = EdgeColorPath::Fallback;
  std::optional<ReductionPlan> plan;
  std::optional<HalvingResult> halving;
  std::vector<BucketStats> buckets;
  // The inequality that licenses the chosen path, checked in rationals.
  std::string inequality;
  bool inequality_holds = false;
  EdgeColoringReport verification;
  std::vector<std::string> warnings;
};

EdgeColoringResult color_edges(const Graph& g, double eps, const ThresholdConfig& cfg, std::uint64_t seed,
                               const EdgeColorOptions& opts = {});

// eps = 1 / ceil(log2 log2 n).
double delta_o_delta_epsilon(std::size_t n);

nlohmann::json to_json(const ReductionPlan& p);
nlohmann::json to_json(const EdgeColoringReport& r);
nlohmann::json to_json(const EdgeColoringResult& r);

}  // namespace lll
