#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"

namespace lll {

enum class ColoringKind { Vertex, Edge };
enum class SplitPolicy { Auto, ForceLll, ForceBalance };
enum class SplitRoute { Lll, Balance };

std::string kind_name(ColoringKind k);
ColoringKind parse_kind(const std::string& s);

struct DefectiveColoring {
  ColoringKind kind = ColoringKind::Vertex;
  std::vector<int> colors;  // per vertex, or per edge in Graph::edges() order
  std::size_t color_count = 0;
  double x = 0.0;
  double q = 0.0;
  double defect_bound = 0.0;  // x + x/q
};

// Δc/2 + Δc/(4 q log2Δ): the count at which a split's bad event holds.
double split_threshold(double delta_current, double q, double log_delta);

// q <= sqrt(Δ / log2^power Δ).
bool q_in_range(double q, double delta, int power);

// Fair bit per vertex (edge), allocated to its own event. Vertex events hold
// when v has at least the threshold of neighbours sharing its colour; edge
// events when either endpoint has at least the threshold of incident edges
// (e included) with e's colour. `log_delta` defaults to log2(delta_current).
// Throws InputError when q is out of range and `enforce_q_range` is set.
LllInstance build_split_instance(const Graph& g, ColoringKind kind, double q, double delta_current,
                                 std::optional<double> log_delta = std::nullopt, bool enforce_q_range = true);

// Chernoff envelopes of the split events.
double chernoff_vertex_bound(double delta, double q);
double chernoff_edge_bound(double delta, double q);

struct SplitOptions {
  SplitPolicy policy = SplitPolicy::Auto;
  std::optional<double> delta_current;  // defaults to the graph's max degree
  std::optional<double> log_delta;      // defaults to log2(delta_current)
  std::size_t r = 1;                    // r handed to the general LLL route
};

struct SplitResult {
  DefectiveColoring coloring;
  SplitRoute route = SplitRoute::Balance;
  double threshold = 0.0;
  std::size_t max_count = 0;  // measured same-colour count (vertex) or per-colour incident count (edge)
  std::vector<std::string> warnings;
};

// Two-colour split. The LLL route goes through solve_general; Auto takes it
// only when Δc > 4 and the Chernoff envelope meets p <= 2^(-(gamma+80) d_vars / r)
// at the largest admissible r, and balances otherwise.
// Throws ContractViolation if the result misses the threshold.
SplitResult split_once(const Graph& g, ColoringKind kind, double q, const ThresholdConfig& cfg, std::uint64_t seed,
                       const SplitOptions& opts = {});

// Local flips: every vertex ends with at most ⌊deg/2⌋ same-coloured neighbours.
std::vector<int> balance_vertex_split(const Graph& g, std::uint64_t seed);

// Euler-circuit alternation: every vertex ends with at most ⌈deg/2⌉ incident
// edges of each colour, except possibly one vertex per all-even component
// with an odd number of edges, which may reach deg/2 + 1.
std::vector<int> balance_edge_split(std::size_t node_count, const std::vector<std::pair<NodeId, NodeId>>& edges);

// Largest same-colour neighbour count (vertex) or per-colour incident edge
// count (edge).
std::size_t max_defect(const Graph& g, ColoringKind kind, const std::vector<int>& colors);

struct HalvingIteration {
  std::size_t index = 0;        // 1-based
  double delta_i = 0.0;         // Δ_i, the class degree bound entering the iteration
  double bound = 0.0;           // Δ/2^i + Δ i/(2^i q log2Δ)
  std::size_t measured = 0;     // max per-class induced degree after the iteration
  std::size_t lll_splits = 0;
  std::size_t balance_splits = 0;
};

struct HalvingResult {
  DefectiveColoring coloring;
  std::size_t iterations = 0;
  double base = 0.0;  // max(1, q^2 log2^4 q)
  std::vector<HalvingIteration> trace;
  std::size_t final_defect = 0;
  std::vector<std::string> warnings;
};

// Iterated halving with k = ⌊log2Δ - log2(base)⌋ >= 1 iterations; each
// iteration splits every colour class (colour c becomes 2c and 2c+1). The
// inductive class-degree bound is checked after every iteration and the
// final defect against x + x/q; violations throw ContractViolation.
HalvingResult iterate_halving(const Graph& g, ColoringKind kind, double q, const ThresholdConfig& cfg,
                              std::uint64_t seed, SplitPolicy policy = SplitPolicy::Auto);

nlohmann::json to_json(const HalvingResult& r);

}  // namespace lll
