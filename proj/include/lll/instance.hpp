#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lll/graph.hpp"
#include "lll/predicate.hpp"

namespace lll {

struct VariableSpec {
  VarId id = 0;
  int domain_size = 2;
  std::vector<double> weights;  // normalised on build; empty means uniform

  static VariableSpec uniform(VarId id, int domain_size);
};

struct EventSpec {
  EventId id = 0;
  std::vector<VarId> vars;  // Vars(A), in predicate order
  Predicate predicate;
};

// owner[v] = the event that alone samples variable v.
struct Allocation {
  std::vector<EventId> owner;
};

// Value per variable; -1 marks an unassigned variable.
using Assignment = std::vector<int>;

// Immutable LLL instance: variables, bad events, allocation, and the two
// derived event graphs.
//   dep_graph    edge iff the events share a dependent variable (degree d)
//   alloc_graph  edge iff one event's allocated variable is a dependent
//                variable of the other (degree d_vars)
class LllInstance {
 public:
  std::size_t variable_count() const noexcept { return variables_.size(); }
  std::size_t event_count() const noexcept { return events_.size(); }

  const VariableSpec& variable(VarId v) const { return variables_.at(static_cast<std::size_t>(v)); }
  const EventSpec& event(EventId a) const { return events_.at(static_cast<std::size_t>(a)); }
  std::span<const VariableSpec> variables() const noexcept { return variables_; }
  std::span<const EventSpec> events() const noexcept { return events_; }

  const Allocation& allocation() const noexcept { return allocation_; }
  EventId owner(VarId v) const { return allocation_.owner.at(static_cast<std::size_t>(v)); }
  // vars(A): variables allocated to event A, ascending.
  std::span<const VarId> allocated(EventId a) const { return allocated_.at(static_cast<std::size_t>(a)); }
  // Events whose Vars() contain v, ascending.
  std::span<const EventId> events_of(VarId v) const { return events_of_.at(static_cast<std::size_t>(v)); }

  const Graph& dep_graph() const noexcept { return dep_graph_; }
  const Graph& alloc_graph() const noexcept { return alloc_graph_; }
  std::size_t d() const noexcept { return dep_graph_.max_degree(); }
  std::size_t d_vars() const noexcept { return alloc_graph_.max_degree(); }

  const CompiledPredicate& predicate(EventId a) const { return compiled_.at(static_cast<std::size_t>(a)); }
  std::span<const int> domains_of(EventId a) const { return local_domains_.at(static_cast<std::size_t>(a)); }

  // Evaluate A on a total assignment.
  bool holds(EventId a, std::span<const int> assignment) const;

  // Product of domain sizes over Vars(A), saturating at 2^62.
  std::uint64_t support_size(EventId a) const;

  friend LllInstance build_instance(std::vector<VariableSpec> variables, std::vector<EventSpec> events,
                                    std::optional<Allocation> allocation);

 private:
  std::vector<VariableSpec> variables_;
  std::vector<EventSpec> events_;
  Allocation allocation_;
  std::vector<std::vector<VarId>> allocated_;
  std::vector<std::vector<EventId>> events_of_;
  std::vector<CompiledPredicate> compiled_;
  std::vector<std::vector<int>> local_domains_;
  Graph dep_graph_;
  Graph alloc_graph_;
};

// Validates and derives both event graphs. Ids must be dense: variables[i].id == i
// and events[i].id == i. Without an allocation, each variable goes to its
// lowest-id dependent event.
LllInstance build_instance(std::vector<VariableSpec> variables, std::vector<EventSpec> events,
                           std::optional<Allocation> allocation = std::nullopt);

struct CheckReport {
  std::vector<EventId> violated_events;
  bool valid() const noexcept { return violated_events.empty(); }
};

// Throws InputError on a partial or out-of-domain assignment.
CheckReport check_assignment(const LllInstance& inst, std::span<const int> assignment);

}  // namespace lll
