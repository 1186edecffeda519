#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "covbal/dataset.hpp"

namespace covbal {

struct CovariateBalance {
  std::string name;
  double treated_mean = 0.0;
  double control_mean = 0.0;
  // (mean_t - mean_c) / sqrt((s_t^2 + s_c^2) / 2)
  double standardized_difference = 0.0;
  // Welch two-sample t test.
  double t_statistic = 0.0;
  double df = 0.0;
  double p_value = 1.0;
};

struct BalanceTable {
  std::vector<CovariateBalance> rows;
};

// Both group variances zero with equal means gives SD = 0 and p = 1; with
// unequal means the difference is undefined and DataError is thrown.
BalanceTable standardized_differences(const Dataset& d);

void write_balance_text(const BalanceTable& table, std::ostream& out);

struct HotellingResult {
  double t2 = 0.0;
  double f = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

// Two-sample Hotelling T^2 with pooled covariance and its exact F
// reference. Needs d < N - 2; a singular pooled covariance throws DataError
// naming the columns that are linear combinations of earlier ones.
HotellingResult hotelling_t2(const Dataset& d);

enum class Interactions { None, Pairwise };

struct LogitTerm {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;  // Wald
  double p_value = 1.0;
};

struct LogitFit {
  std::vector<LogitTerm> terms;       // intercept first
  std::vector<std::string> dropped;   // aliased design columns, not estimated
  bool converged = false;
  bool separation = false;            // some |coefficient| > 30
  int iterations = 0;
  double deviance = 0.0;
  std::vector<double> deviance_trace; // after each iteration, starting at beta = 0
  double gradient_max_norm = 0.0;     // score at the reported estimate
};

// Binomial logistic regression by IRLS (step-halving keeps the deviance
// non-increasing). Stops when the relative deviance change is below 1e-10
// or after 100 iterations. A separation flag forces converged = false.
// The design must already contain any intercept column.
LogitFit fit_logistic(const Eigen::MatrixXd& design, const Eigen::VectorXd& response,
                      const std::vector<std::string>& names);

// Regresses the treated indicator on an intercept and all covariates, plus
// every pairwise product with Interactions::Pairwise.
LogitFit logistic_fit(const Dataset& d, Interactions interactions);

void write_logit_text(const LogitFit& fit, std::ostream& out);

}  // namespace covbal
