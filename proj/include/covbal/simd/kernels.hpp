#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

// Data-parallel inner loops behind the distance fill and the permutation
// recount. Each instruction-set variant must return results bit-identical to
// the scalar reference; tests/test_simd.cpp enforces that.
namespace covbal::simd {

enum class Isa { Scalar, Avx2, Neon };

const char* isa_name(Isa isa);

// Label-pair tallies over a list of edges tail -> head. For undirected edges
// tc and ct are the two orientations of a cross edge.
struct EdgeLabelCounts {
  std::uint64_t tt = 0;  // both treated
  std::uint64_t tc = 0;  // tail treated, head control
  std::uint64_t ct = 0;  // tail control, head treated
  std::uint64_t cc = 0;  // both control

  std::uint64_t total() const { return tt + tc + ct + cc; }
  bool operator==(const EdgeLabelCounts&) const = default;
};

struct KernelTable {
  Isa isa;

  // out[j] = sum_k (columns[k * stride + j] - point[k])^2 for j < count,
  // accumulated in increasing k. `columns` is column-major with leading
  // dimension `stride`.
  void (*squared_distances)(std::span<const double> point, const double* columns,
                            std::size_t stride, std::size_t count, double* out);

  // labels[v] is 1 for treated, 0 for control; tails/heads index into labels.
  EdgeLabelCounts (*count_edge_labels)(std::span<const std::int32_t> tails,
                                       std::span<const std::int32_t> heads,
                                       std::span<const std::int32_t> labels);
};

const KernelTable& scalar_kernels();

// nullptr when the variant was not compiled in or the CPU lacks the ISA.
const KernelTable* kernels_for(Isa isa);

// Widest supported variant, unless COVBAL_SIMD=scalar|avx2|neon forces one
// (an unsupported forced choice falls back to scalar). Chosen once.
const KernelTable& active_kernels();

}  // namespace covbal::simd
