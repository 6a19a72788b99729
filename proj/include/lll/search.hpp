#pragma once

#include <cstdint>
#include <optional>
#include <span>

#include "lll/instance.hpp"

namespace lll {

// Depth-first search over the positive-weight values of `free_vars`
// (ascending variable order, ascending values) for the lexicographically first
// completion of `base` under which none of `events` holds. Every variable of
// those events outside `free_vars` must already be set in `base`.
std::optional<Assignment> exhaustive_search(const LllInstance& inst, std::span<const EventId> events,
                                            std::span<const VarId> free_vars, Assignment base);

// Product of domain sizes, saturating at 2^62.
std::uint64_t assignment_space(const LllInstance& inst, std::span<const VarId> vars);

// Ground-truth oracle: an assignment avoiding every event, or nullopt if none
// exists. Throws CapacityError when the full assignment space exceeds 2^24.
std::optional<Assignment> brute_force_solve(const LllInstance& inst);

}  // namespace lll
