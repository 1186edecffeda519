#include <gtest/gtest.h>

#include <cstring>
#include <random>
#include <vector>

#include "covbal/simd/kernels.hpp"

using namespace covbal::simd;

namespace {

std::vector<const KernelTable*> variants() {
  std::vector<const KernelTable*> out;
  for (Isa isa : {Isa::Avx2, Isa::Neon})
    if (const KernelTable* k = kernels_for(isa)) out.push_back(k);
  return out;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST(Simd, ScalarTableIsScalar) {
  EXPECT_EQ(scalar_kernels().isa, Isa::Scalar);
  EXPECT_EQ(kernels_for(Isa::Scalar), &scalar_kernels());
  EXPECT_STREQ(isa_name(active_kernels().isa), isa_name(active_kernels().isa));
}

TEST(Simd, ScalarSquaredDistancesReference) {
  // Two columns, three targets: column-major with stride 4 (one padding slot).
  const std::vector<double> cols{1, 2, 3, -9, 10, 20, 30, -9};
  const std::vector<double> point{1, 10};
  double out[3];
  scalar_kernels().squared_distances(point, cols.data(), 4, 3, out);
  EXPECT_EQ(out[0], 0.0);
  EXPECT_EQ(out[1], 1.0 + 100.0);
  EXPECT_EQ(out[2], 4.0 + 400.0);
}

TEST(Simd, SquaredDistancesBitExactAcrossVariants) {
  std::mt19937_64 g(1);
  std::normal_distribution<double> z;
  for (const KernelTable* k : variants()) {
    for (std::size_t dim : {1u, 2u, 3u, 7u, 10u, 33u, 100u}) {
      for (std::size_t count : {0u, 1u, 3u, 4u, 5u, 8u, 15u, 64u, 131u}) {
        const std::size_t stride = count + g() % 3;
        std::vector<double> cols(dim * stride);
        for (auto& v : cols) v = z(g) * 1e3;
        std::vector<double> point(dim);
        for (auto& v : point) v = z(g);
        std::vector<double> a(count + 1, -1.0), b(count + 1, -1.0);
        scalar_kernels().squared_distances(point, cols.data(), stride, count, a.data());
        k->squared_distances(point, cols.data(), stride, count, b.data());
        for (std::size_t j = 0; j < count; ++j)
          ASSERT_TRUE(same_bits(a[j], b[j])) << isa_name(k->isa) << " d=" << dim << " j=" << j;
        EXPECT_EQ(b[count], -1.0) << "wrote past count";
      }
    }
  }
}

TEST(Simd, EdgeLabelCountsMatchScalar) {
  std::mt19937_64 g(2);
  for (const KernelTable* k : variants()) {
    for (std::size_t n : {2u, 5u, 8u, 9u, 100u, 1001u}) {
      for (std::size_t edges : {0u, 1u, 7u, 8u, 9u, 63u, 1000u, 4097u}) {
        std::vector<std::int32_t> labels(n), tails(edges), heads(edges);
        for (auto& l : labels) l = static_cast<std::int32_t>(g() & 1);
        for (std::size_t e = 0; e < edges; ++e) {
          tails[e] = static_cast<std::int32_t>(g() % n);
          heads[e] = static_cast<std::int32_t>(g() % n);
        }
        const EdgeLabelCounts a = scalar_kernels().count_edge_labels(tails, heads, labels);
        const EdgeLabelCounts b = k->count_edge_labels(tails, heads, labels);
        EXPECT_EQ(a, b) << isa_name(k->isa) << " n=" << n << " edges=" << edges;
        EXPECT_EQ(a.total(), edges);
      }
    }
  }
}

TEST(Simd, EdgeLabelCountsHandComputed) {
  const std::vector<std::int32_t> labels{1, 0, 1, 0};
  const std::vector<std::int32_t> tails{0, 0, 1, 1, 2};
  const std::vector<std::int32_t> heads{2, 1, 3, 0, 3};
  for (const KernelTable* k : [&] {
         auto v = variants();
         v.push_back(&scalar_kernels());
         return v;
       }()) {
    const EdgeLabelCounts c = k->count_edge_labels(tails, heads, labels);
    EXPECT_EQ(c.tt, 1u);
    EXPECT_EQ(c.tc, 2u);
    EXPECT_EQ(c.ct, 1u);
    EXPECT_EQ(c.cc, 1u);
  }
}
