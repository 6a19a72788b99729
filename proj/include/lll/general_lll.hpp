#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "lll/config.hpp"
#include "lll/graph.hpp"
#include "lll/instance.hpp"
#include "lll/light_partition.hpp"
#include "lll/probability.hpp"
#include "lll/resilient_solver.hpp"

namespace lll {

// Largest admissible r: ⌊d_vars / log2 d_vars⌋, at least 1.
std::size_t max_rounds_parameter(std::size_t d_vars);

struct CriterionReport {
  bool pass = false;
  double p = 0.0;        // max event probability
  double bound = 0.0;    // 2^(-c d_vars / r)
  double margin = 0.0;   // bound / p, infinite when p = 0
  bool exact = true;
  double c = 0.0;
  std::size_t r = 1;
};

// Throws InputError unless 1 <= r <= max_rounds_parameter(d_vars).
CriterionReport criterion_check(const LllInstance& inst, std::size_t r, double c, const EstimateOptions& opts = {});

struct CertificateReport {
  double value = 0.0;      // max over events
  double threshold = 0.0;  // d^-c2
  bool pass = false;
  std::vector<double> per_event;
};

// Per event: Σ over parts meeting N_vars[A] of 2^|N_vars[A] ∩ P_i| · p_A · d^c3,
// where N_vars[A] is A's inclusive neighbourhood in the allocation graph.
CertificateReport resilience_certificate(const LllInstance& inst, const Partition& part, const ThresholdConfig& cfg);

enum class RPreset { Manual, Polynomial, Subexponential };

// Polynomial: ⌈d_vars / log2 d_vars⌉; Subexponential: ⌈log2 d_vars⌉; both
// clamped to [1, max_rounds_parameter(d_vars)].
std::size_t preset_r(const LllInstance& inst, RPreset preset);

struct GeneralOptions {
  std::optional<double> c;  // defaults to gamma + 80
  SolverOptions solver;
};

struct GeneralResult {
  Assignment assignment;
  CriterionReport criterion;
  CertificateReport certificate;
  Partition partition;
  std::size_t partition_rounds = 0;  // rounds spent computing the light partition
  SolveResult solve;
  std::vector<std::string> warnings;
};

// Light partition of the allocation graph into r parts, certificate, then the
// resilient solver. Strict configs turn criterion or certificate failure into
// PreconditionError; relaxed configs record a warning and continue.
GeneralResult solve_general(const LllInstance& inst, std::size_t r, const ThresholdConfig& cfg, std::uint64_t seed,
                            const GeneralOptions& opts = {});

nlohmann::json to_json(const CriterionReport& c);
nlohmann::json to_json(const CertificateReport& c);
nlohmann::json to_json(const GeneralResult& r);

}  // namespace lll
