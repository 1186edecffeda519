#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "covbal/dataset.hpp"
#include "covbal/graphs.hpp"
#include "covbal/test_result.hpp"

namespace covbal {

// Exact permutation-null moments of D12 and D21 (they share mean and
// variance). correlation = covariance / variance.
struct CrossNnMoments {
  double mean = 0.0;
  double variance = 0.0;
  double covariance = 0.0;
  double correlation = 0.0;
};

// n must be even and >= 4 (std::invalid_argument otherwise).
CrossNnMoments crossnn_moments(std::size_t n, std::uint64_t c1, std::uint64_t c2);

// Large-sample correlation (1 + q1 - q2) / (1 + q1 + q2), where q1 and q2 are
// the limits of 2 c1 / N and 2 c2 / N.
double crossnn_limit_correlation(double q1, double q2);

struct CrossNnCounts {
  std::uint64_t d12 = 0;  // treated subjects whose neighbour is a control
  std::uint64_t d21 = 0;  // controls whose neighbour is treated
};

// Sums over all k out-edges. Requires equal group sizes (DataError).
CrossNnCounts compute_d12_d21(const NnGraph& g, std::span<const Group> labels);

// CrossNN on a prebuilt distance matrix. options.k == 1 gives the standard
// test (asymptotic and/or permutation p-values, small Z_D rejects); k > 1
// runs the k-NN generalisation with permutation inference only.
TestResult crossnn_test(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options = {});

// Euclidean distances on the raw covariates.
TestResult crossnn_test(const Dataset& d, const TestOptions& options = {});

// k >= 2, permutation p-value only.
TestResult crossnn_knn_test(const Dataset& d, const DistanceMatrix& dm, std::size_t k,
                            const TestOptions& options = {});

}  // namespace covbal
