#include "covbal/crossmst.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "covbal/error.hpp"
#include "covbal/normal.hpp"
#include "covbal/simd/kernels.hpp"

namespace covbal {

CrossMstMoments crossmst_moments(std::size_t n, std::uint64_t c3) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("moments need an even N >= 4, got N = " + std::to_string(n));
  }
  const double N = static_cast<double>(n);
  const double C3 = static_cast<double>(c3);
  CrossMstMoments m;
  m.mean = (N - 2.0) / 4.0;
  m.variance = (-(N - 2.0) * (N - 6.0) + 2.0 * C3 * N * (N - 4.0) / (N - 1.0)) / (16.0 * (N - 3.0));
  m.covariance = (N - 2.0) * (3.0 * (N - 2.0) - 2.0 * C3 * N / (N - 1.0)) / (16.0 * (N - 3.0));
  if (!(m.variance > 0.0)) {
    throw NumericError("CrossMST variance is not positive (N = " + std::to_string(n) +
                       ", c3 = " + std::to_string(c3) + ")");
  }
  const double rho = m.covariance / m.variance;
  if (!(std::abs(rho) <= 1.0 + 1e-12)) {
    throw NumericError("CrossMST correlation " + std::to_string(rho) + " outside [-1, 1]");
  }
  m.correlation = std::clamp(rho, -1.0, 1.0);
  return m;
}

double crossmst_limit_correlation(double q3) { return (3.0 - 2.0 * q3) / (2.0 * q3 - 1.0); }

CrossMstCounts compute_r1_r2(const MstForest& f, std::span<const Group> labels) {
  if (labels.size() != f.size()) throw DataError("compute_r1_r2: label count != tree size");
  const auto treated = std::count(labels.begin(), labels.end(), Group::Treated);
  if (2 * static_cast<std::size_t>(treated) != labels.size()) {
    throw DataError("compute_r1_r2: unequal group sizes");
  }
  const auto indicator = label_indicator(labels);
  const auto c = simd::active_kernels().count_edge_labels(f.tails(), f.heads(), indicator);
  return {c.tt, c.cc, c.tc + c.ct};
}

namespace {

TestResult run_crossmst(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options) {
  validate_balanced_sizes(d);
  if (dm.size() != d.size()) {
    throw DataError("distance matrix has " + std::to_string(dm.size()) + " rows, dataset has " +
                    std::to_string(d.size()));
  }
  const PValueMode mode = resolve_mode(options, d.size());
  const MstForest f = build_kmst(dm, options.k);
  const CrossMstCounts counts = compute_r1_r2(f, d.labels());

  TestResult r;
  r.test = "crossmst";
  r.k = options.k;
  r.n = d.size();
  r.dim = d.dim();
  r.raw_counts = {counts.r1, counts.r2};
  r.edge_count = f.edge_count();
  r.c3 = f.c3();
  r.max_degree = f.max_degree();
  const auto observed = static_cast<std::int64_t>(std::max(counts.r1, counts.r2));

  if (options.k == 1) {
    const CrossMstMoments m = crossmst_moments(d.size(), f.c3());
    const double sd = std::sqrt(m.variance);
    const double z1 = (static_cast<double>(counts.r1) - m.mean) / sd;
    const double z2 = (static_cast<double>(counts.r2) - m.mean) / sd;
    r.mean = m.mean;
    r.variance = m.variance;
    r.rho = m.correlation;
    r.component_z = {z1, z2};
    r.statistic = std::max(z1, z2);
    if (mode != PValueMode::Permutation) {
      // P(max(Z1, Z2) >= z) = 1 - P(Z1 < z, Z2 < z)
      r.p_asymptotic =
          clamp_probability(2.0 * normal_sf(r.statistic) - bvn_upper(r.statistic, m.correlation));
    }
  } else {
    r.statistic = static_cast<double>(observed);
  }

  if (mode == PValueMode::Permutation || mode == PValueMode::Both) {
    const PermutationPlan plan{d.size(), d.n_treated(), options.n_perm, options.seed};
    const auto& kernels = simd::active_kernels();
    const auto tails = f.tails();
    const auto heads = f.heads();
    r.permutation = permutation_pvalue(
        plan,
        [&](std::span<const std::int32_t> labels) {
          const auto c = kernels.count_edge_labels(tails, heads, labels);
          return static_cast<std::int64_t>(std::max(c.tt, c.cc));
        },
        observed, Tail::Upper, options.threads);
  }
  return r;
}

}  // namespace

TestResult crossmst_test(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options) {
  return run_crossmst(d, dm, options);
}

TestResult crossmst_test(const Dataset& d, const TestOptions& options) {
  return run_crossmst(d, pairwise_distances(d, {.standardize = false, .threads = options.threads}),
                      options);
}

TestResult crossmst_kmst_test(const Dataset& d, const DistanceMatrix& dm, std::size_t k,
                              const TestOptions& options) {
  if (k < 2) throw std::invalid_argument("crossmst_kmst_test: k must be at least 2");
  TestOptions o = options;
  o.k = k;
  return run_crossmst(d, dm, o);
}

}  // namespace covbal
