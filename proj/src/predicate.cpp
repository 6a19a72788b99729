#include "lll/predicate.hpp"

#include <cmath>
#include <string>
#include <unordered_map>

#include "lll/errors.hpp"

namespace lll {

namespace {

constexpr std::uint64_t kMaxTableCodes = std::uint64_t{1} << 24;

int position_of(const std::unordered_map<VarId, int>& index, VarId v) {
  auto it = index.find(v);
  if (it == index.end()) {
    throw InputError("predicate references variable " + std::to_string(v) +
                     " that is not among the event's dependent variables");
  }
  return it->second;
}

}  // namespace

int count_threshold(double t) {
  if (t <= 0) return 0;
  // Thresholds are computed in floating point; treat values within 1e-9 of an
  // integer as that integer.
  return static_cast<int>(std::ceil(t - 1e-9));
}

CompiledPredicate CompiledPredicate::compile(const Predicate& p, std::span<const VarId> dependent,
                                             std::span<const int> domains) {
  CompiledPredicate out;
  out.domains_.assign(domains.begin(), domains.end());
  std::unordered_map<VarId, int> index;
  for (std::size_t i = 0; i < dependent.size(); ++i) index.emplace(dependent[i], static_cast<int>(i));

  if (const auto* table = std::get_if<TruthTable>(&p)) {
    out.kind_ = Kind::Table;
    if (dependent.size() > 20) throw InputError("truth-table predicates are limited to arity 20");
    std::uint64_t codes = 1;
    out.radix_.resize(dependent.size());
    for (std::size_t i = 0; i < dependent.size(); ++i) {
      out.radix_[i] = codes;
      codes *= static_cast<std::uint64_t>(domains[i]);
      if (codes > kMaxTableCodes) throw CapacityError("truth-table assignment space exceeds 2^24");
    }
    out.table_.assign(codes, 0);
    for (const auto& row : table->satisfying) {
      if (row.size() != dependent.size()) {
        throw InputError("truth-table row has " + std::to_string(row.size()) + " values, expected " +
                         std::to_string(dependent.size()));
      }
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (row[i] < 0 || row[i] >= domains[i]) throw InputError("truth-table value outside domain");
        code += out.radix_[i] * static_cast<std::uint64_t>(row[i]);
      }
      out.table_[code] = 1;
    }
    return out;
  }

  if (const auto* count = std::get_if<CountThreshold>(&p)) {
    out.kind_ = Kind::Count;
    if (count->reference_var) {
      out.ref_pos_ = position_of(index, *count->reference_var);
    } else {
      out.ref_value_ = count->reference_value;
    }
    for (const auto& group : count->groups) {
      std::vector<int> positions;
      positions.reserve(group.size());
      for (VarId v : group) positions.push_back(position_of(index, v));
      out.groups_.push_back(std::move(positions));
    }
    out.threshold_ = count_threshold(count->threshold);
    return out;
  }

  const auto& load = std::get<MaxPartLoad>(p);
  out.kind_ = Kind::Load;
  for (VarId v : load.vars) out.load_pos_.push_back(position_of(index, v));
  out.threshold_ = count_threshold(load.threshold);
  return out;
}

bool CompiledPredicate::evaluate(std::span<const int> local) const {
  switch (kind_) {
    case Kind::Table: {
      std::uint64_t code = 0;
      for (std::size_t i = 0; i < radix_.size(); ++i) code += radix_[i] * static_cast<std::uint64_t>(local[i]);
      return table_[code] != 0;
    }
    case Kind::Count: {
      const int ref = ref_pos_ >= 0 ? local[ref_pos_] : ref_value_;
      for (const auto& group : groups_) {
        int hits = 0;
        for (int pos : group) hits += local[pos] == ref;
        if (hits >= threshold_) return true;
      }
      return false;
    }
    case Kind::Load: {
      if (threshold_ <= 0) return true;
      if (static_cast<int>(load_pos_.size()) < threshold_) return false;
      int max_domain = 0;
      for (int pos : load_pos_) max_domain = std::max(max_domain, domains_[pos]);
      thread_local std::vector<int> counts;
      counts.assign(static_cast<std::size_t>(max_domain), 0);
      for (int pos : load_pos_) {
        if (++counts[static_cast<std::size_t>(local[pos])] >= threshold_) return true;
      }
      return false;
    }
  }
  return false;
}

bool CompiledPredicate::never_satisfiable() const {
  std::vector<int> partial(domains_.size(), -1);
  return !satisfiable(partial, [](int, int) { return true; });
}

}  // namespace lll
