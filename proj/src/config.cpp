#include "lll/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "lll/errors.hpp"

namespace lll {

ThresholdConfig ThresholdConfig::paper() { return ThresholdConfig{}; }

ThresholdConfig ThresholdConfig::relaxed() {
  ThresholdConfig cfg;
  cfg.c1 = 1.5;
  cfg.c2 = 3.0;
  cfg.c3 = 1.0;
  cfg.gamma = 3.0;
  cfg.defect_const = 3.0;
  cfg.strict = false;
  return cfg;
}

void ThresholdConfig::validate() const {
  if (!(c1 > 0 && c2 > 0 && c3 > 0)) throw InputError("threshold exponents must be positive");
  if (!(gamma > 0)) throw InputError("gamma must be positive");
  if (!(defect_const > 0)) throw InputError("defect_const must be positive");
  if (mc_samples == 0) throw InputError("mc_samples must be positive");
  if (strict && !(c2 > c1 && c1 > c3 && c3 > 2.1)) {
    throw InputError("strict constants require c2 > c1 > c3 > 2.1");
  }
}

double ThresholdConfig::threshold(std::size_t d, double c) {
  return std::pow(static_cast<double>(std::max<std::size_t>(d, 2)), -c);
}

void to_json(nlohmann::json& j, const ThresholdConfig& cfg) {
  j = nlohmann::json{{"c1", cfg.c1},
                     {"c2", cfg.c2},
                     {"c3", cfg.c3},
                     {"gamma", cfg.gamma},
                     {"defect_const", cfg.defect_const},
                     {"mc_samples", cfg.mc_samples},
                     {"subset_cap", cfg.subset_cap},
                     {"strict", cfg.strict}};
}

void from_json(const nlohmann::json& j, ThresholdConfig& cfg) {
  ThresholdConfig base = j.value("strict", true) ? ThresholdConfig::paper() : ThresholdConfig::relaxed();
  base.c1 = j.value("c1", base.c1);
  base.c2 = j.value("c2", base.c2);
  base.c3 = j.value("c3", base.c3);
  base.gamma = j.value("gamma", base.gamma);
  base.defect_const = j.value("defect_const", base.defect_const);
  base.mc_samples = j.value("mc_samples", base.mc_samples);
  base.subset_cap = j.value("subset_cap", base.subset_cap);
  base.strict = j.value("strict", base.strict);
  cfg = base;
}

ThresholdConfig load_constants(const std::string& name_or_path) {
  if (name_or_path == "strict" || name_or_path == "paper") return ThresholdConfig::paper();
  if (name_or_path == "relaxed") return ThresholdConfig::relaxed();
  std::ifstream in(name_or_path);
  if (!in) throw InputError("unknown constants preset or unreadable file '" + name_or_path + "'");
  ThresholdConfig cfg = nlohmann::json::parse(in).get<ThresholdConfig>();
  cfg.validate();
  return cfg;
}

}  // namespace lll
