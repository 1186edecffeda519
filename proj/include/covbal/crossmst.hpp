#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "covbal/dataset.hpp"
#include "covbal/graphs.hpp"
#include "covbal/test_result.hpp"

namespace covbal {

// Exact permutation-null moments of R1 and R2 on a spanning tree whose
// adjacent-edge-pair count is c3.
struct CrossMstMoments {
  double mean = 0.0;
  double variance = 0.0;
  double covariance = 0.0;
  double correlation = 0.0;
};

CrossMstMoments crossmst_moments(std::size_t n, std::uint64_t c3);

// (3 - 2 q3) / (2 q3 - 1), q3 the limit of c3 / N.
double crossmst_limit_correlation(double q3);

struct CrossMstCounts {
  std::uint64_t r1 = 0;     // treated-treated edges
  std::uint64_t r2 = 0;     // control-control edges
  std::uint64_t cross = 0;  // treated-control edges
};

// Counts over every edge of the forest (all k trees).
CrossMstCounts compute_r1_r2(const MstForest& f, std::span<const Group> labels);

// Large Z_R = max(Z_R1, Z_R2) rejects. k > 1 uses the k-MST union and
// permutation inference only.
TestResult crossmst_test(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options = {});
TestResult crossmst_test(const Dataset& d, const TestOptions& options = {});
TestResult crossmst_kmst_test(const Dataset& d, const DistanceMatrix& dm, std::size_t k,
                              const TestOptions& options = {});

}  // namespace covbal
