#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace covbal {

using CostMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct AssignmentSolution {
  // row_to_col[i] is the column assigned to row i; columns are used at most once.
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

// Minimum-cost assignment of every row to a distinct column (rows <= cols),
// by successive shortest augmenting paths with dual potentials (the
// Hungarian method in its O(rows^2 cols) form). Costs must be finite.
AssignmentSolution solve_assignment(const CostMatrix& cost);

}  // namespace covbal
