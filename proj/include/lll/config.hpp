#pragma once

#include <cstddef>
#include <string>

#include <nlohmann/json.hpp>

namespace lll {

// Exponent constants and budgets shared by every solver stage.
//
//   c1  dangerous threshold exponent: an event is dangerous once its A' probability
//       reaches d^-c1
//   c2  resilience exponent: Pr[A'] <= d^-c2 certifies resilience
//   c3  inner exponent of A': Pr_row2[A_S] >= d^-c3
//
// Strict mode enforces c2 > c1 > c3 > 2.1 and turns every warning of the
// orchestration layer (criterion, certificate, q-range) into a hard error.
struct ThresholdConfig {
  double c1 = 5.5;
  double c2 = 30.0;
  double c3 = 3.0;
  double gamma = 99.0;
  double defect_const = 99.0;
  std::size_t mc_samples = 4000;
  std::size_t subset_cap = 16;
  bool strict = true;

  static ThresholdConfig paper();
  static ThresholdConfig relaxed();

  // Throws InputError when a field is out of range; strict configs also
  // require the c2 > c1 > c3 > 2.1 chain.
  void validate() const;

  // d^-c with the degree clamped to at least 2 so thresholds stay below 1.
  static double threshold(std::size_t d, double c);
};

void to_json(nlohmann::json& j, const ThresholdConfig& cfg);
void from_json(const nlohmann::json& j, ThresholdConfig& cfg);

// "strict", "relaxed", or a path to a JSON file with ThresholdConfig fields.
ThresholdConfig load_constants(const std::string& name_or_path);

}  // namespace lll
