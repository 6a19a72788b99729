#include "lll/randomness_table.hpp"

#include <string>

#include "lll/errors.hpp"
#include "lll/rng.hpp"

namespace lll {

RandomnessTable::RandomnessTable(const LllInstance& inst, std::uint64_t seed)
    : inst_(&inst), seed_(seed), count_(inst.variable_count()), cells_(new std::atomic<int>[2 * count_]) {
  for (std::size_t i = 0; i < 2 * count_; ++i) cells_[i].store(-1, std::memory_order_relaxed);
}

std::atomic<int>& RandomnessTable::cell(VarId v, int row) const {
  if (v < 0 || static_cast<std::size_t>(v) >= count_ || (row != 1 && row != 2)) {
    throw InputError("randomness table cell (" + std::to_string(v) + ", " + std::to_string(row) + ") out of range");
  }
  return cells_[2 * static_cast<std::size_t>(v) + static_cast<std::size_t>(row - 1)];
}

int RandomnessTable::cell_value(const VariableSpec& var, std::uint64_t seed, int row) {
  const std::uint64_t key = 2 * static_cast<std::uint64_t>(var.id) + static_cast<std::uint64_t>(row - 1);
  return sample_index(var.weights, to_unit(derive_seed(seed, key)));
}

int RandomnessTable::value(VarId v, int row) {
  auto& c = cell(v, row);
  int current = c.load(std::memory_order_acquire);
  if (current >= 0) return current;
  const int fresh = cell_value(inst_->variable(v), seed_, row);
  c.compare_exchange_strong(current, fresh, std::memory_order_acq_rel);
  return fresh;
}

bool RandomnessTable::materialized(VarId v, int row) const { return peek(v, row) >= 0; }

int RandomnessTable::peek(VarId v, int row) const { return cell(v, row).load(std::memory_order_acquire); }

std::vector<int> RandomnessTable::snapshot(int row) const {
  std::vector<int> out(count_);
  for (std::size_t v = 0; v < count_; ++v) out[v] = peek(static_cast<VarId>(v), row);
  return out;
}

}  // namespace lll
