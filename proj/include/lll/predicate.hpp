#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace lll {

using VarId = std::int32_t;
using EventId = std::int32_t;

// Explicit satisfying assignments, each a row of values aligned with the
// event's dependent variable list.
struct TruthTable {
  std::vector<std::vector<int>> satisfying;
};

// Satisfied iff some group has at least `threshold` variables equal to the
// reference (a variable's value, or a constant when reference_var is empty).
// One group models the vertex-colouring events; two groups (one per endpoint)
// model the edge-colouring events.
struct CountThreshold {
  std::optional<VarId> reference_var;
  int reference_value = 0;
  std::vector<std::vector<VarId>> groups;
  double threshold = 0.0;
};

// Satisfied iff some value occurs at least `threshold` times among `vars`.
struct MaxPartLoad {
  std::vector<VarId> vars;
  double threshold = 0.0;
};

using Predicate = std::variant<TruthTable, CountThreshold, MaxPartLoad>;

// Integer form of a real "at least t" threshold.
int count_threshold(double t);

// Predicate rewritten over local positions (indices into the event's
// dependent variable list) for fast evaluation.
class CompiledPredicate {
 public:
  // `dependent` is the event's ordered dependent variable list and
  // `domains` the domain size of each of those variables.
  static CompiledPredicate compile(const Predicate& p, std::span<const VarId> dependent,
                                   std::span<const int> domains);

  bool evaluate(std::span<const int> local) const;

  // Whether some completion of the partial local assignment (value < 0 means
  // free) can satisfy the predicate. `allowed(pos, value)` reports whether a
  // free position may take a value (positive weight).
  template <class Allowed>
  bool satisfiable(std::span<const int> partial, Allowed&& allowed) const;

  // True when no assignment at all satisfies the predicate.
  bool never_satisfiable() const;

 private:
  enum class Kind { Table, Count, Load };
  Kind kind_ = Kind::Table;
  // Table
  std::vector<std::uint8_t> table_;  // indexed by mixed-radix code
  std::vector<std::uint64_t> radix_;
  // Count
  int ref_pos_ = -1;
  int ref_value_ = 0;
  std::vector<std::vector<int>> groups_;
  // Load
  std::vector<int> load_pos_;
  int threshold_ = 0;
  std::vector<int> domains_;
};

template <class Allowed>
bool CompiledPredicate::satisfiable(std::span<const int> partial, Allowed&& allowed) const {
  switch (kind_) {
    case Kind::Table: {
      if (table_.empty()) return false;
      // Look for a satisfying row consistent with the partial assignment.
      for (std::uint64_t code = 0; code < table_.size(); ++code) {
        if (!table_[code]) continue;
        bool ok = true;
        for (std::size_t i = 0; i < radix_.size() && ok; ++i) {
          const int value = static_cast<int>((code / radix_[i]) % static_cast<std::uint64_t>(domains_[i]));
          if (partial[i] >= 0) ok = partial[i] == value;
          else ok = allowed(static_cast<int>(i), value);
        }
        if (ok) return true;
      }
      return false;
    }
    case Kind::Count: {
      auto group_ok = [&](int ref) {
        for (const auto& group : groups_) {
          int reachable = 0;
          for (int pos : group) {
            if (pos == ref_pos_) {
              ++reachable;
            } else if (partial[pos] >= 0) {
              reachable += partial[pos] == ref;
            } else if (ref < domains_[pos] && allowed(pos, ref)) {
              ++reachable;
            }
          }
          if (reachable >= threshold_) return true;
        }
        return false;
      };
      if (ref_pos_ < 0) return group_ok(ref_value_);
      if (partial[ref_pos_] >= 0) return group_ok(partial[ref_pos_]);
      for (int value = 0; value < domains_[ref_pos_]; ++value) {
        if (allowed(ref_pos_, value) && group_ok(value)) return true;
      }
      return false;
    }
    case Kind::Load: {
      int max_domain = 0;
      for (int pos : load_pos_) max_domain = std::max(max_domain, domains_[pos]);
      for (int value = 0; value < max_domain; ++value) {
        int reachable = 0;
        for (int pos : load_pos_) {
          if (partial[pos] >= 0) reachable += partial[pos] == value;
          else if (value < domains_[pos] && allowed(pos, value)) ++reachable;
        }
        if (reachable >= threshold_) return true;
      }
      return false;
    }
  }
  return true;
}

}  // namespace lll
