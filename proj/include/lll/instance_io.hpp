#pragma once

#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "lll/instance.hpp"

namespace lll {

// Instance JSON:
//   {"variables": [{"id", "domain", "weights"}],
//    "events": [{"id", "vars", "predicate": {"kind", "params"}}],
//    "allocation": {"<var>": <event>, ...}}            (optional)
// Weights may be numbers, decimal strings, or "a/b" strings.
LllInstance instance_from_json(const nlohmann::json& j);
nlohmann::json instance_to_json(const LllInstance& inst);
LllInstance read_instance_file(const std::string& path);

nlohmann::json predicate_to_json(const Predicate& p);
Predicate predicate_from_json(const nlohmann::json& j);

// Assignments are var -> value maps.
nlohmann::json assignment_to_json(std::span<const int> assignment);
Assignment assignment_from_json(const nlohmann::json& j, std::size_t variable_count);

double parse_weight(const nlohmann::json& w);

}  // namespace lll
