#include <arm_neon.h>

#include <algorithm>

#include "covbal/simd/kernels.hpp"

namespace covbal::simd {

namespace {

void squared_distances_neon(std::span<const double> point, const double* columns,
                            std::size_t stride, std::size_t count, double* out) {
  const std::size_t dim = point.size();
  std::size_t j = 0;
  for (; j + 2 <= count; j += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < dim; ++k) {
      const float64x2_t x = vld1q_f64(columns + k * stride + j);
      const float64x2_t diff = vsubq_f64(x, vdupq_n_f64(point[k]));
      acc = vaddq_f64(acc, vmulq_f64(diff, diff));
    }
    vst1q_f64(out + j, acc);
  }
  for (; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = columns[k * stride + j] - point[k];
      acc = acc + diff * diff;
    }
    out[j] = acc;
  }
}

// No gather on NEON: labels are fetched scalar, the tallies run four-wide.
EdgeLabelCounts count_edge_labels_neon(std::span<const std::int32_t> tails,
                                       std::span<const std::int32_t> heads,
                                       std::span<const std::int32_t> labels) {
  const std::size_t m = tails.size();
  const int32x4_t ones = vdupq_n_s32(1);
  EdgeLabelCounts c;
  std::size_t e = 0;
  constexpr std::size_t kFlush = std::size_t{1} << 28;
  while (e + 4 <= m) {
    int32x4_t tt = vdupq_n_s32(0);
    int32x4_t tc = vdupq_n_s32(0);
    int32x4_t ct = vdupq_n_s32(0);
    const std::size_t stop = std::min(m - (m - e) % 4, e + kFlush);
    for (; e < stop; e += 4) {
      const std::int32_t av[4] = {labels[tails[e]], labels[tails[e + 1]], labels[tails[e + 2]],
                                  labels[tails[e + 3]]};
      const std::int32_t bv[4] = {labels[heads[e]], labels[heads[e + 1]], labels[heads[e + 2]],
                                  labels[heads[e + 3]]};
      const int32x4_t a = vld1q_s32(av);
      const int32x4_t b = vld1q_s32(bv);
      tt = vaddq_s32(tt, vandq_s32(a, b));
      tc = vaddq_s32(tc, vandq_s32(a, veorq_s32(b, ones)));
      ct = vaddq_s32(ct, vandq_s32(veorq_s32(a, ones), b));
    }
    c.tt += static_cast<std::uint64_t>(vaddvq_s32(tt));
    c.tc += static_cast<std::uint64_t>(vaddvq_s32(tc));
    c.ct += static_cast<std::uint64_t>(vaddvq_s32(ct));
  }
  for (; e < m; ++e) {
    const std::int32_t a = labels[tails[e]];
    const std::int32_t b = labels[heads[e]];
    c.tt += static_cast<std::uint64_t>(a & b);
    c.tc += static_cast<std::uint64_t>(a & (b ^ 1));
    c.ct += static_cast<std::uint64_t>((a ^ 1) & b);
  }
  c.cc = m - c.tt - c.tc - c.ct;
  return c;
}

}  // namespace

const KernelTable& neon_kernels_table() {
  static const KernelTable table{Isa::Neon, &squared_distances_neon, &count_edge_labels_neon};
  return table;
}

}  // namespace covbal::simd
