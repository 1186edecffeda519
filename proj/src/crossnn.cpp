#include "covbal/crossnn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "covbal/error.hpp"
#include "covbal/normal.hpp"
#include "covbal/simd/kernels.hpp"

namespace covbal {

namespace {

void require_even_size(std::size_t n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("moments need an even N >= 4, got N = " + std::to_string(n));
  }
}

void require_matching(const Dataset& d, const DistanceMatrix& dm) {
  validate_balanced_sizes(d);
  if (dm.size() != d.size()) {
    throw DataError("distance matrix has " + std::to_string(dm.size()) + " rows, dataset has " +
                    std::to_string(d.size()));
  }
}

double clamp_correlation(double rho) {
  if (!(std::abs(rho) <= 1.0 + 1e-12)) {
    throw NumericError("correlation " + std::to_string(rho) + " outside [-1, 1]");
  }
  return std::clamp(rho, -1.0, 1.0);
}

}  // namespace

CrossNnMoments crossnn_moments(std::size_t n, std::uint64_t c1, std::uint64_t c2) {
  require_even_size(n);
  const double N = static_cast<double>(n);
  const double two_c1 = 2.0 * static_cast<double>(c1);
  const double two_c2 = 2.0 * static_cast<double>(c2);
  const double base = N * N / (N - 1.0) - N * N / ((N - 1.0) * (N - 1.0));
  const double scale = N / ((N - 1.0) * (N - 3.0));

  CrossNnMoments m;
  m.mean = N * N / (4.0 * (N - 1.0));
  m.variance = (base + two_c1 * scale * (N - 2.0) + two_c2 * scale * (N - 4.0)) / 16.0;
  m.covariance = (base + (two_c1 - two_c2) * scale * (N - 2.0)) / 16.0;
  m.correlation = clamp_correlation(m.covariance / m.variance);
  return m;
}

double crossnn_limit_correlation(double q1, double q2) { return (1.0 + q1 - q2) / (1.0 + q1 + q2); }

CrossNnCounts compute_d12_d21(const NnGraph& g, std::span<const Group> labels) {
  if (labels.size() != g.size()) throw DataError("compute_d12_d21: label count != graph size");
  const auto treated = std::count(labels.begin(), labels.end(), Group::Treated);
  if (2 * static_cast<std::size_t>(treated) != labels.size()) {
    throw DataError("compute_d12_d21: unequal group sizes");
  }
  const auto indicator = label_indicator(labels);
  const auto c = simd::active_kernels().count_edge_labels(g.tails(), g.heads(), indicator);
  return {c.tc, c.ct};
}

namespace {

TestResult run_crossnn(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options) {
  require_matching(d, dm);
  const PValueMode mode = resolve_mode(options, d.size());
  const NnGraph g = build_knn(dm, options.k);
  const CrossNnCounts counts = compute_d12_d21(g, d.labels());

  TestResult r;
  r.test = "crossnn";
  r.k = options.k;
  r.n = d.size();
  r.dim = d.dim();
  r.raw_counts = {counts.d12, counts.d21};
  r.edge_count = g.tails().size();
  const auto observed = static_cast<std::int64_t>(std::min(counts.d12, counts.d21));

  if (options.k == 1) {
    const NnCounts& c = *g.counts();
    const CrossNnMoments m = crossnn_moments(d.size(), c.c1, c.c2);
    const double sd = std::sqrt(m.variance);
    const double z1 = (static_cast<double>(counts.d12) - m.mean) / sd;
    const double z2 = (static_cast<double>(counts.d21) - m.mean) / sd;
    r.c1 = c.c1;
    r.c2 = c.c2;
    r.mean = m.mean;
    r.variance = m.variance;
    r.rho = m.correlation;
    r.component_z = {z1, z2};
    r.statistic = std::min(z1, z2);
    if (mode != PValueMode::Permutation) {
      // P(min(Z1, Z2) <= z) = 1 - P(Z1 > z, Z2 > z)
      r.p_asymptotic =
          clamp_probability(2.0 * normal_cdf(r.statistic) - bvn_lower(r.statistic, m.correlation));
    }
  } else {
    r.statistic = static_cast<double>(observed);
  }

  if (mode == PValueMode::Permutation || mode == PValueMode::Both) {
    const PermutationPlan plan{d.size(), d.n_treated(), options.n_perm, options.seed};
    const auto& kernels = simd::active_kernels();
    const auto tails = g.tails();
    const auto heads = g.heads();
    r.permutation = permutation_pvalue(
        plan,
        [&](std::span<const std::int32_t> labels) {
          const auto c = kernels.count_edge_labels(tails, heads, labels);
          return static_cast<std::int64_t>(std::min(c.tc, c.ct));
        },
        observed, Tail::Lower, options.threads);
  }
  return r;
}

}  // namespace

TestResult crossnn_test(const Dataset& d, const DistanceMatrix& dm, const TestOptions& options) {
  return run_crossnn(d, dm, options);
}

TestResult crossnn_test(const Dataset& d, const TestOptions& options) {
  return run_crossnn(d, pairwise_distances(d, {.standardize = false, .threads = options.threads}),
                     options);
}

TestResult crossnn_knn_test(const Dataset& d, const DistanceMatrix& dm, std::size_t k,
                            const TestOptions& options) {
  if (k < 2) throw std::invalid_argument("crossnn_knn_test: k must be at least 2");
  TestOptions o = options;
  o.k = k;
  return run_crossnn(d, dm, o);
}

}  // namespace covbal
