#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <vector>

#include "lll/instance.hpp"

namespace lll {

// Two lazily sampled value rows per variable. A cell's value depends only on
// (seed, variable, row), so materialisation order never changes outcomes.
// Concurrent materialisation of the same cell is safe.
class RandomnessTable {
 public:
  RandomnessTable(const LllInstance& inst, std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t variable_count() const noexcept { return count_; }

  // Materialises and returns the cell; row is 1 or 2.
  int value(VarId v, int row);
  bool materialized(VarId v, int row) const;
  // Value without materialising; -1 if the cell is not materialised.
  int peek(VarId v, int row) const;

  // The value the cell would take, computed without touching the table.
  static int cell_value(const VariableSpec& var, std::uint64_t seed, int row);

  // Row values per variable, -1 where not materialised.
  std::vector<int> snapshot(int row) const;

 private:
  std::atomic<int>& cell(VarId v, int row) const;

  const LllInstance* inst_;
  std::uint64_t seed_;
  std::size_t count_;
  std::unique_ptr<std::atomic<int>[]> cells_;
};

}  // namespace lll
