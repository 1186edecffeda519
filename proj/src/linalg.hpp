#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace covbal::detail {

// Indices of columns that lie (to relative tolerance tol) in the span of the
// columns before them. Modified Gram-Schmidt with one re-orthogonalisation.
inline std::vector<std::size_t> aliased_columns(const Eigen::MatrixXd& a, double tol = 1e-9) {
  std::vector<std::size_t> aliased;
  std::vector<Eigen::VectorXd> basis;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Eigen::VectorXd v = a.col(j);
    const double norm0 = v.norm();
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& q : basis) v -= q.dot(v) * q;
    }
    const double norm = v.norm();
    if (norm0 == 0.0 || norm <= tol * norm0) {
      aliased.push_back(static_cast<std::size_t>(j));
    } else {
      basis.push_back(v / norm);
    }
  }
  return aliased;
}

}  // namespace covbal::detail
