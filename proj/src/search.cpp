#include "lll/search.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "lll/errors.hpp"

namespace lll {

std::uint64_t assignment_space(const LllInstance& inst, std::span<const VarId> vars) {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t total = 1;
  for (VarId v : vars) {
    const auto dom = static_cast<std::uint64_t>(inst.variable(v).domain_size);
    if (total > cap / dom) return cap;
    total *= dom;
  }
  return total;
}

std::optional<Assignment> exhaustive_search(const LllInstance& inst, std::span<const EventId> events,
                                            std::span<const VarId> free_vars, Assignment base) {
  std::vector<VarId> order(free_vars.begin(), free_vars.end());
  std::sort(order.begin(), order.end());
  for (VarId v : order) base[static_cast<std::size_t>(v)] = -1;

  std::vector<int> slot(inst.event_count(), -1);
  std::vector<EventId> local(events.begin(), events.end());
  for (std::size_t i = 0; i < local.size(); ++i) slot[static_cast<std::size_t>(local[i])] = static_cast<int>(i);

  std::vector<int> remaining(local.size(), 0);
  for (std::size_t i = 0; i < local.size(); ++i) {
    for (VarId v : inst.event(local[i]).vars) remaining[i] += base[static_cast<std::size_t>(v)] < 0;
  }
  for (std::size_t i = 0; i < local.size(); ++i) {
    if (remaining[i] == 0 && inst.holds(local[i], base)) return std::nullopt;
  }

  std::vector<std::vector<int>> touching(order.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    for (EventId e : inst.events_of(order[k])) {
      if (slot[static_cast<std::size_t>(e)] >= 0) touching[k].push_back(slot[static_cast<std::size_t>(e)]);
    }
  }

  auto assign = [&](std::size_t k) {
    bool ok = true;
    for (int e : touching[k]) {
      if (--remaining[static_cast<std::size_t>(e)] == 0 && inst.holds(local[static_cast<std::size_t>(e)], base)) ok = false;
    }
    return ok;
  };
  auto unassign = [&](std::size_t k) {
    for (int e : touching[k]) ++remaining[static_cast<std::size_t>(e)];
    base[static_cast<std::size_t>(order[k])] = -1;
  };

  const std::size_t n = order.size();
  std::vector<int> tried(n + 1, -1);
  std::size_t k = 0;
  while (true) {
    if (k == n) return base;
    const auto v = static_cast<std::size_t>(order[k]);
    if (tried[k] >= 0) unassign(k);
    const auto& w = inst.variables()[v].weights;
    int next = tried[k] + 1;
    while (next < static_cast<int>(w.size()) && w[static_cast<std::size_t>(next)] <= 0.0) ++next;
    if (next >= static_cast<int>(w.size())) {
      tried[k] = -1;
      if (k == 0) return std::nullopt;
      --k;
      continue;
    }
    tried[k] = next;
    base[v] = next;
    if (assign(k)) {
      ++k;
      tried[k] = -1;
    }
  }
}

std::optional<Assignment> brute_force_solve(const LllInstance& inst) {
  std::vector<VarId> vars(inst.variable_count());
  std::iota(vars.begin(), vars.end(), 0);
  if (assignment_space(inst, vars) > (std::uint64_t{1} << 24)) {
    throw CapacityError("brute force limited to 2^24 assignments");
  }
  std::vector<EventId> events(inst.event_count());
  std::iota(events.begin(), events.end(), 0);
  return exhaustive_search(inst, events, vars, Assignment(inst.variable_count(), -1));
}

}  // namespace lll
