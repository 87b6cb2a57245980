#include "slscover/cover_matrix.hpp"

#include <algorithm>

namespace slscover {

std::size_t CoverMatrix::nonzeros() const {
  std::size_t nnz = 0;
  for (const auto& row : rows) nnz += row.size();
  return nnz;
}

std::vector<std::vector<int>> CoverMatrix::column_supports() const {
  std::vector<std::vector<int>> cols(num_cols);
  for (int i = 0; i < num_rows(); ++i) {
    for (int j : rows[i]) cols[j].push_back(i);
  }
  return cols;
}

bool CoverMatrix::covers_all(std::span<const int> chosen_columns) const {
  std::vector<std::uint8_t> selected(num_cols, 0);
  for (int j : chosen_columns) {
    if (j >= 0 && j < num_cols) selected[j] = 1;
  }
  return covers_all(std::span<const std::uint8_t>(selected));
}

bool CoverMatrix::covers_all(std::span<const std::uint8_t> column_selected) const {
  return std::all_of(rows.begin(), rows.end(), [&](const std::vector<int>& row) {
    return std::any_of(row.begin(), row.end(),
                       [&](int j) { return column_selected[j] != 0; });
  });
}

std::vector<std::vector<int>> CoverMatrix::dense() const {
  std::vector<std::vector<int>> out(num_rows(), std::vector<int>(num_cols, 0));
  for (int i = 0; i < num_rows(); ++i) {
    for (int j : rows[i]) out[i][j] = 1;
  }
  return out;
}

CoverMatrix CoverMatrix::from_dense(const std::vector<std::vector<int>>& dense) {
  CoverMatrix a;
  a.num_cols = dense.empty() ? 0 : static_cast<int>(dense.front().size());
  for (const auto& drow : dense) {
    std::vector<int> row;
    for (int j = 0; j < static_cast<int>(drow.size()); ++j) {
      if (drow[j] != 0) row.push_back(j);
    }
    a.rows.push_back(std::move(row));
  }
  return a;
}

}  // namespace slscover
