#include "combtest/assignment.hpp"

#include <algorithm>
#include <limits>

#include "combtest/errors.hpp"

namespace combtest {

std::vector<int> max_weight_assignment(std::span<const double> weights, int m) {
  if (m < 1 || weights.size() != static_cast<std::size_t>(m) * static_cast<std::size_t>(m)) {
    throw InvalidArgument("max_weight_assignment: weights must be m x m");
  }
  const auto size = static_cast<std::size_t>(m);
  const double inf = std::numeric_limits<double>::infinity();
  // Minimize cost = -weight. Rows and columns are 1-based; 0 is the sentinel.
  auto cost = [&](std::size_t row, std::size_t col) {
    return -weights[(row - 1) * size + (col - 1)];
  };
  std::vector<double> u(size + 1, 0.0), v(size + 1, 0.0);
  std::vector<std::size_t> row_of_col(size + 1, 0), way(size + 1, 0);
  std::vector<double> min_slack(size + 1);
  std::vector<char> used(size + 1);

  for (std::size_t row = 1; row <= size; ++row) {
    row_of_col[0] = row;
    std::size_t col0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[col0] = 1;
      const std::size_t row0 = row_of_col[col0];
      double delta = inf;
      std::size_t col1 = 0;
      for (std::size_t col = 1; col <= size; ++col) {
        if (used[col]) continue;
        const double reduced = cost(row0, col) - u[row0] - v[col];
        if (reduced < min_slack[col]) {
          min_slack[col] = reduced;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (std::size_t col = 0; col <= size; ++col) {
        if (used[col]) {
          u[row_of_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (row_of_col[col0] != 0);
    do {
      const std::size_t col1 = way[col0];
      row_of_col[col0] = row_of_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }

  std::vector<int> column_of_row(size);
  for (std::size_t col = 1; col <= size; ++col) {
    column_of_row[row_of_col[col] - 1] = static_cast<int>(col - 1);
  }
  return column_of_row;
}

}  // namespace combtest
