#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "covbal/crossmst.hpp"
#include "covbal/error.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace covbal;

namespace {

std::vector<Group> to_groups(const std::vector<int>& l) {
  std::vector<Group> g;
  for (int v : l) g.push_back(v ? Group::Treated : Group::Control);
  return g;
}

std::vector<std::vector<double>> spread_line(std::size_t n) {
  std::vector<std::vector<double>> pts;
  double x = 0, gap = 1;
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back({x});
    x += gap;
    gap *= 1.1;
  }
  return pts;
}

}  // namespace

TEST(CrossMstMoments, MeanAtNSix) { EXPECT_NEAR(crossmst_moments(6, 4).mean, 1.0, 1e-15); }

TEST(CrossMstMoments, RejectsOddOrTinyN) {
  EXPECT_THROW(crossmst_moments(7, 5), std::invalid_argument);
  EXPECT_THROW(crossmst_moments(2, 0), std::invalid_argument);
}

TEST(CrossMstMoments, MatchExhaustiveEnumeration) {
  std::mt19937_64 g(77);
  for (std::size_t n : {4u, 6u, 8u}) {
    for (int rep = 0; rep < 20; ++rep) {
      const auto pts = oracle::gaussian_points(n, 1 + g() % 4, g);
      const auto tree = oracle::prim(oracle::euclidean(pts));
      const auto exact = oracle::enumerate_moments(
          n, [&](const std::vector<int>& l) { return oracle::r1_r2(tree, l); });
      const CrossMstMoments m = crossmst_moments(n, oracle::adjacent_pairs(tree, n));
      EXPECT_NEAR(m.mean, static_cast<double>(exact.mean1), 1e-12);
      EXPECT_NEAR(m.variance, static_cast<double>(exact.var1), 1e-12);
      EXPECT_NEAR(m.variance, static_cast<double>(exact.var2), 1e-12);
      EXPECT_NEAR(m.covariance, static_cast<double>(exact.cov), 1e-12);
    }
  }
}

TEST(CrossMstMoments, PathTreeAtNEight) {
  const auto pts = spread_line(8);
  const auto tree = oracle::prim(oracle::euclidean(pts));
  ASSERT_EQ(oracle::adjacent_pairs(tree, 8), 6u);
  const auto exact = oracle::enumerate_moments(8, [&](const std::vector<int>& l) { return oracle::r1_r2(tree, l); });
  ASSERT_EQ(exact.count, 70u);
  const CrossMstMoments m = crossmst_moments(8, 6);
  EXPECT_NEAR(m.variance, static_cast<double>(exact.var1), 1e-12);
  EXPECT_NEAR(m.covariance, static_cast<double>(exact.cov), 1e-12);
}

TEST(CrossMstMoments, CorrelationLimit) {
  for (double q3 : {1.2, 1.5, 2.0}) {
    const std::size_t n = 1000000;
    const double rho = crossmst_moments(n, static_cast<std::uint64_t>(q3 * n)).correlation;
    EXPECT_NEAR(rho, crossmst_limit_correlation(q3), 1e-5) << q3;
    EXPECT_LE(std::abs(rho), 1.0);
  }
}

TEST(CrossMstCounts, FourPointLineExample) {
  const auto pts = std::vector<std::vector<double>>{{0}, {1}, {3}, {7}};
  const MstForest f = build_kmst(pairwise_distances(fixture::make_dataset(pts, {1, 1, 0, 0})));
  const CrossMstCounts c = compute_r1_r2(f, to_groups({1, 1, 0, 0}));
  EXPECT_EQ(c.r1, 1u);
  EXPECT_EQ(c.r2, 1u);
  EXPECT_EQ(c.cross, 1u);
  EXPECT_THROW(compute_r1_r2(f, to_groups({1, 0, 0, 0})), DataError);
}

TEST(CrossMstCounts, AlternatingAndSeparatedPaths) {
  const std::size_t n = 12;
  const auto pts = spread_line(n);
  std::vector<int> alt(n), split(n);
  for (std::size_t i = 0; i < n; ++i) {
    alt[i] = static_cast<int>(i % 2);
    split[i] = i < n / 2;
  }
  const MstForest f = build_kmst(pairwise_distances(fixture::make_dataset(pts, alt)));
  const CrossMstCounts a = compute_r1_r2(f, to_groups(alt));
  EXPECT_EQ(a.r1 + a.r2, 0u);
  EXPECT_EQ(a.cross, n - 1);
  const CrossMstCounts s = compute_r1_r2(f, to_groups(split));
  EXPECT_EQ(s.r1, (n - 2) / 2);
  EXPECT_EQ(s.r2, (n - 2) / 2);
  EXPECT_EQ(s.cross, 1u);
}

TEST(CrossMstTest, PartitionIdentityAndLabelSwap) {
  std::mt19937_64 g(15);
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = 2 * (4 + g() % 40);
    const auto pts = oracle::gaussian_points(n, 1 + g() % 8, g);
    std::vector<int> labels = fixture::halves(n);
    std::shuffle(labels.begin(), labels.end(), g);
    std::vector<int> flipped = labels;
    for (int& v : flipped) v = 1 - v;
    const Dataset d = fixture::make_dataset(pts, labels);
    const DistanceMatrix dm = pairwise_distances(d);
    const TestOptions opt{.mode = PValueMode::Both, .n_perm = 200, .seed = 4};
    const TestResult a = crossmst_test(d, dm, opt);
    const TestResult b = crossmst_test(d.with_labels(to_groups(flipped)), dm, opt);
    const auto tree = oracle::prim(oracle::euclidean(pts));
    std::uint64_t cross = 0;
    for (const auto& e : tree) cross += labels[static_cast<std::size_t>(e.u)] != labels[static_cast<std::size_t>(e.v)];
    EXPECT_EQ(a.raw_counts[0] + a.raw_counts[1] + cross, n - 1);
    EXPECT_EQ(a.raw_counts[0], b.raw_counts[1]);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_EQ(*a.p_asymptotic, *b.p_asymptotic);
    EXPECT_EQ(a.permutation->p, b.permutation->p);
    EXPECT_EQ(*a.c3, oracle::adjacent_pairs(tree, n));
  }
}

TEST(CrossMstTest, AsymptoticPValueFormula) {
  std::mt19937_64 g(19);
  const Dataset d = fixture::make_dataset(oracle::gaussian_points(150, 4, g), fixture::halves(150));
  const TestResult r = crossmst_test(d);
  const auto [z1, z2] = *r.component_z;
  EXPECT_EQ(r.statistic, std::max(z1, z2));
  // P(max <= z) = P(Z1 < z, Z2 < z) = P(-Z1 > -z, -Z2 > -z).
  EXPECT_NEAR(*r.p_asymptotic, 1.0 - oracle::bvn_equal_upper(-r.statistic, *r.rho), 1e-10);
  EXPECT_TRUE(r.max_degree.has_value());
}

TEST(CrossMstTest, PermutationPValueTracksExactEnumeration) {
  std::mt19937_64 g(43);
  for (int rep = 0; rep < 5; ++rep) {
    const auto pts = oracle::gaussian_points(8, 3, g);
    std::vector<int> labels = fixture::halves(8);
    std::shuffle(labels.begin(), labels.end(), g);
    const auto tree = oracle::prim(oracle::euclidean(pts));
    const auto [o1, o2] = oracle::r1_r2(tree, labels);
    const long observed = std::max(o1, o2);
    int extreme = 0, total = 0;
    oracle::for_each_balanced_labeling(8, [&](const std::vector<int>& l) {
      const auto [a, b] = oracle::r1_r2(tree, l);
      extreme += std::max(a, b) >= observed;
      ++total;
    });
    const double exact = static_cast<double>(extreme) / total;
    const TestResult r = crossmst_test(fixture::make_dataset(pts, labels),
                                       {.mode = PValueMode::Permutation, .n_perm = 20000, .seed = 2});
    EXPECT_NEAR(r.permutation->p, exact, 4 * std::sqrt(exact * (1 - exact) / 20000) + 1e-4);
    EXPECT_FALSE(r.p_asymptotic.has_value());
  }
}

TEST(CrossMstTest, PerfectMatchingIsNotRejected) {
  std::mt19937_64 g(21);
  const auto sites = oracle::gaussian_points(60, 3, g);
  std::vector<std::vector<double>> pts;
  std::vector<int> labels;
  for (const auto& s : sites) {
    pts.push_back(s);
    labels.push_back(1);
    auto twin = s;
    twin[0] += 1e-6;
    pts.push_back(twin);
    labels.push_back(0);
  }
  const TestResult r = crossmst_test(fixture::make_dataset(pts, labels));
  EXPECT_LT(r.statistic, -3.0);
  EXPECT_GT(*r.p_asymptotic, 0.999);
}

TEST(CrossMstKmst, ForestPartitionAndDenseForest) {
  std::mt19937_64 g(25);
  const std::size_t n = 14;
  const Dataset d = fixture::make_dataset(oracle::gaussian_points(n, 2, g), fixture::halves(n));
  const DistanceMatrix dm = pairwise_distances(d);
  const TestResult two = crossmst_kmst_test(d, dm, 2, {.n_perm = 300});
  const MstForest f = build_kmst(dm, 2);
  const CrossMstCounts c = compute_r1_r2(f, d.labels());
  EXPECT_EQ(c.r1 + c.r2 + c.cross, 2 * (n - 1));
  EXPECT_EQ(two.raw_counts[0], c.r1);
  EXPECT_EQ(two.edge_count, 2 * (n - 1));
  // Trees 1 and 2 together contain tree 1's counts plus tree 2's.
  const CrossMstCounts one = compute_r1_r2(build_kmst(dm, 1), d.labels());
  EXPECT_GE(c.r1, one.r1);
  // The densest constructible forest leaves little room for the statistic to move.
  std::size_t k = 2;
  while (k + 1 <= n / 2) {
    try {
      build_kmst(dm, k + 1);
    } catch (const std::invalid_argument&) {
      break;
    }
    ++k;
  }
  ASSERT_GE(k, 4u);
  const TestResult dense = crossmst_kmst_test(d, dm, k, {.n_perm = 300});
  EXPECT_GT(dense.permutation->p, 0.2);
  EXPECT_THROW(crossmst_kmst_test(d, dm, 1), std::invalid_argument);
}
