#include "lll/instance.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "lll/errors.hpp"

namespace lll {

VariableSpec VariableSpec::uniform(VarId id, int domain_size) {
  return VariableSpec{id, domain_size,
                      std::vector<double>(static_cast<std::size_t>(domain_size), 1.0 / domain_size)};
}

namespace {

void normalise(VariableSpec& var) {
  if (var.domain_size < 1) {
    throw InputError("variable " + std::to_string(var.id) + " has domain size " + std::to_string(var.domain_size));
  }
  if (var.weights.empty()) {
    var.weights.assign(static_cast<std::size_t>(var.domain_size), 1.0 / var.domain_size);
    return;
  }
  if (var.weights.size() != static_cast<std::size_t>(var.domain_size)) {
    throw InputError("variable " + std::to_string(var.id) + " lists " + std::to_string(var.weights.size()) +
                     " weights for domain size " + std::to_string(var.domain_size));
  }
  double total = 0.0;
  for (double w : var.weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InputError("variable " + std::to_string(var.id) + " has a negative or non-finite weight");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw InputError("weights of variable " + std::to_string(var.id) + " sum to " + std::to_string(total));
  }
  for (double& w : var.weights) w /= total;
}

Graph graph_from_sets(std::vector<std::vector<NodeId>> adj) {
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return Graph::from_adjacency(std::move(adj));
}

}  // namespace

LllInstance build_instance(std::vector<VariableSpec> variables, std::vector<EventSpec> events,
                           std::optional<Allocation> allocation) {
  LllInstance inst;
  const std::size_t n_vars = variables.size();
  const std::size_t n_events = events.size();
  for (std::size_t i = 0; i < n_vars; ++i) {
    if (variables[i].id != static_cast<VarId>(i)) {
      throw InputError("variable ids must be dense and ordered; position " + std::to_string(i) + " has id " +
                       std::to_string(variables[i].id));
    }
    normalise(variables[i]);
  }

  inst.events_of_.assign(n_vars, {});
  inst.compiled_.reserve(n_events);
  inst.local_domains_.reserve(n_events);
  for (std::size_t a = 0; a < n_events; ++a) {
    auto& ev = events[a];
    if (ev.id != static_cast<EventId>(a)) {
      throw InputError("event ids must be dense and ordered; position " + std::to_string(a) + " has id " +
                       std::to_string(ev.id));
    }
    std::vector<int> domains;
    domains.reserve(ev.vars.size());
    for (VarId v : ev.vars) {
      if (v < 0 || static_cast<std::size_t>(v) >= n_vars) {
        throw InputError("event " + std::to_string(a) + " references missing variable " + std::to_string(v));
      }
      domains.push_back(variables[static_cast<std::size_t>(v)].domain_size);
    }
    auto sorted = ev.vars;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw InputError("event " + std::to_string(a) + " lists a dependent variable twice");
    }
    auto compiled = CompiledPredicate::compile(ev.predicate, ev.vars, domains);
    if (ev.vars.empty() && compiled.evaluate({})) {
      throw InputError("event " + std::to_string(a) + " has no dependent variables but always holds");
    }
    for (VarId v : sorted) inst.events_of_[static_cast<std::size_t>(v)].push_back(static_cast<EventId>(a));
    inst.compiled_.push_back(std::move(compiled));
    inst.local_domains_.push_back(std::move(domains));
  }

  if (allocation) {
    if (allocation->owner.size() != n_vars) {
      throw InputError("allocation covers " + std::to_string(allocation->owner.size()) + " variables, expected " +
                       std::to_string(n_vars));
    }
    for (std::size_t v = 0; v < n_vars; ++v) {
      const EventId owner = allocation->owner[v];
      const auto& deps = inst.events_of_[v];
      if (!std::binary_search(deps.begin(), deps.end(), owner)) {
        throw InputError("variable " + std::to_string(v) + " is allocated to event " + std::to_string(owner) +
                         " which does not depend on it");
      }
    }
    inst.allocation_ = std::move(*allocation);
  } else {
    inst.allocation_.owner.resize(n_vars);
    for (std::size_t v = 0; v < n_vars; ++v) {
      if (inst.events_of_[v].empty()) {
        throw InputError("variable " + std::to_string(v) + " is not a dependent variable of any event");
      }
      inst.allocation_.owner[v] = inst.events_of_[v].front();
    }
  }
  inst.allocated_.assign(n_events, {});
  for (std::size_t v = 0; v < n_vars; ++v) {
    inst.allocated_[static_cast<std::size_t>(inst.allocation_.owner[v])].push_back(static_cast<VarId>(v));
  }

  std::vector<std::vector<NodeId>> dep(n_events);
  std::vector<std::vector<NodeId>> alloc(n_events);
  std::vector<EventId> mark(n_events, -1);
  for (std::size_t a = 0; a < n_events; ++a) {
    for (VarId v : events[a].vars) {
      for (EventId b : inst.events_of_[static_cast<std::size_t>(v)]) {
        if (b == static_cast<EventId>(a) || mark[static_cast<std::size_t>(b)] == static_cast<EventId>(a)) continue;
        mark[static_cast<std::size_t>(b)] = static_cast<EventId>(a);
        dep[a].push_back(b);
      }
    }
    for (VarId v : inst.allocated_[a]) {
      for (EventId b : inst.events_of_[static_cast<std::size_t>(v)]) {
        if (b == static_cast<EventId>(a)) continue;
        alloc[a].push_back(b);
        alloc[static_cast<std::size_t>(b)].push_back(static_cast<NodeId>(a));
      }
    }
  }
  inst.dep_graph_ = graph_from_sets(std::move(dep));
  inst.alloc_graph_ = graph_from_sets(std::move(alloc));
  inst.variables_ = std::move(variables);
  inst.events_ = std::move(events);

  const std::size_t dv = inst.d_vars();
  if (inst.d() < dv || inst.d() > dv * dv + dv) {
    throw ContractViolation("degree relation d_vars <= d <= d_vars^2 + d_vars violated");
  }
  return inst;
}

bool LllInstance::holds(EventId a, std::span<const int> assignment) const {
  const auto& ev = event(a);
  thread_local std::vector<int> local;
  local.resize(ev.vars.size());
  for (std::size_t i = 0; i < ev.vars.size(); ++i) local[i] = assignment[static_cast<std::size_t>(ev.vars[i])];
  return predicate(a).evaluate(local);
}

std::uint64_t LllInstance::support_size(EventId a) const {
  constexpr std::uint64_t cap = std::uint64_t{1} << 62;
  std::uint64_t total = 1;
  for (int dom : domains_of(a)) {
    if (total > cap / static_cast<std::uint64_t>(dom)) return cap;
    total *= static_cast<std::uint64_t>(dom);
  }
  return total;
}

CheckReport check_assignment(const LllInstance& inst, std::span<const int> assignment) {
  if (assignment.size() != inst.variable_count()) {
    throw InputError("assignment has " + std::to_string(assignment.size()) + " values, expected " +
                     std::to_string(inst.variable_count()));
  }
  for (std::size_t v = 0; v < assignment.size(); ++v) {
    if (assignment[v] < 0) throw InputError("assignment leaves variable " + std::to_string(v) + " unset");
    if (assignment[v] >= inst.variables()[v].domain_size) {
      throw InputError("value of variable " + std::to_string(v) + " outside its domain");
    }
  }
  CheckReport report;
  for (std::size_t a = 0; a < inst.event_count(); ++a) {
    if (inst.holds(static_cast<EventId>(a), assignment)) report.violated_events.push_back(static_cast<EventId>(a));
  }
  return report;
}

}  // namespace lll
