#include "covbal/assignment.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace covbal {

AssignmentSolution solve_assignment(const CostMatrix& cost) {
  const auto rows = static_cast<std::size_t>(cost.rows());
  const auto cols = static_cast<std::size_t>(cost.cols());
  if (rows > cols) throw std::invalid_argument("solve_assignment: more rows than columns");
  if (!cost.allFinite()) throw std::invalid_argument("solve_assignment: non-finite cost");

  constexpr double inf = std::numeric_limits<double>::infinity();
  // 1-based: column 0 is a virtual source holding the row being inserted.
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0), min_slack(cols + 1);
  std::vector<std::size_t> owner(cols + 1, 0), via(cols + 1, 0);
  std::vector<char> visited(cols + 1);

  for (std::size_t i = 1; i <= rows; ++i) {
    owner[0] = i;
    std::size_t j0 = 0;
    std::fill(min_slack.begin(), min_slack.end(), inf);
    std::fill(visited.begin(), visited.end(), 0);
    do {
      visited[j0] = 1;
      const std::size_t i0 = owner[j0];
      const double* row = cost.data() + (i0 - 1) * cols;
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= cols; ++j) {
        if (visited[j]) continue;
        const double slack = row[j - 1] - u[i0] - v[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          via[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= cols; ++j) {
        if (visited[j]) {
          u[owner[j]] += delta;
          v[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j1;
    } while (owner[j0] != 0);
    do {
      const std::size_t j1 = via[j0];
      owner[j0] = owner[j1];
      j0 = j1;
    } while (j0 != 0);
  }

  AssignmentSolution out;
  out.row_to_col.assign(rows, 0);
  for (std::size_t j = 1; j <= cols; ++j) {
    if (owner[j] != 0) out.row_to_col[owner[j] - 1] = j - 1;
  }
  for (std::size_t i = 0; i < rows; ++i) {
    out.cost += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(out.row_to_col[i]));
  }
  return out;
}

}  // namespace covbal
