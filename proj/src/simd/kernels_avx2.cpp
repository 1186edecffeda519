#include <immintrin.h>

#include "covbal/simd/kernels.hpp"

namespace covbal::simd {

namespace {

// Four targets per vector; each lane accumulates over k in the same order as
// the scalar loop. mul and add stay separate (no FMA) to keep rounding equal.
void squared_distances_avx2(std::span<const double> point, const double* columns,
                            std::size_t stride, std::size_t count, double* out) {
  const std::size_t dim = point.size();
  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d x = _mm256_loadu_pd(columns + k * stride + j);
      const __m256d diff = _mm256_sub_pd(x, _mm256_set1_pd(point[k]));
      acc = _mm256_add_pd(acc, _mm256_mul_pd(diff, diff));
    }
    _mm256_storeu_pd(out + j, acc);
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

std::uint64_t horizontal_sum(__m256i v) {
  alignas(32) std::int32_t lanes[8];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  std::uint64_t s = 0;
  for (std::int32_t x : lanes) s += static_cast<std::uint64_t>(x);
  return s;
}

EdgeLabelCounts count_edge_labels_avx2(std::span<const std::int32_t> tails,
                                       std::span<const std::int32_t> heads,
                                       std::span<const std::int32_t> labels) {
  const std::size_t m = tails.size();
  const __m256i ones = _mm256_set1_epi32(1);
  EdgeLabelCounts c;
  std::size_t e = 0;
  // Lane counters are int32; flush well before they could overflow.
  constexpr std::size_t kFlush = std::size_t{1} << 28;
  while (e + 8 <= m) {
    __m256i tt = _mm256_setzero_si256();
    __m256i tc = _mm256_setzero_si256();
    __m256i ct = _mm256_setzero_si256();
    const std::size_t stop = std::min(m - (m - e) % 8, e + kFlush);
    for (; e < stop; e += 8) {
      const __m256i ti = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(tails.data() + e));
      const __m256i hi = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(heads.data() + e));
      const __m256i a = _mm256_i32gather_epi32(labels.data(), ti, 4);
      const __m256i b = _mm256_i32gather_epi32(labels.data(), hi, 4);
      tt = _mm256_add_epi32(tt, _mm256_and_si256(a, b));
      tc = _mm256_add_epi32(tc, _mm256_and_si256(a, _mm256_xor_si256(b, ones)));
      ct = _mm256_add_epi32(ct, _mm256_and_si256(_mm256_xor_si256(a, ones), b));
    }
    c.tt += horizontal_sum(tt);
    c.tc += horizontal_sum(tc);
    c.ct += horizontal_sum(ct);
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

const KernelTable& avx2_kernels_table() {
  static const KernelTable table{Isa::Avx2, &squared_distances_avx2, &count_edge_labels_avx2};
  return table;
}

}  // namespace covbal::simd
