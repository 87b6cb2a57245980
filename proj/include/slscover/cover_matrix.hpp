#pragma once

// Sparse 0/1 covering matrix stored row-wise.

#include <cstdint>
#include <span>
#include <vector>

namespace slscover {

struct CoverMatrix {
  int num_cols = 0;
  std::vector<std::vector<int>> rows;  // each row: sorted, distinct column ids

  int num_rows() const { return static_cast<int>(rows.size()); }
  std::size_t nonzeros() const;

  /// Row ids containing each column.
  std::vector<std::vector<int>> column_supports() const;

  bool covers_all(std::span<const int> chosen_columns) const;
  bool covers_all(std::span<const std::uint8_t> column_selected) const;

  /// Dense m x n 0/1 view (tests and small diagnostics only).
  std::vector<std::vector<int>> dense() const;
  static CoverMatrix from_dense(const std::vector<std::vector<int>>& dense);

  friend bool operator==(const CoverMatrix&, const CoverMatrix&) = default;
};

}  // namespace slscover
