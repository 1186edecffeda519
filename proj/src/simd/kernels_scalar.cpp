#include "covbal/simd/kernels.hpp"

namespace covbal::simd {

namespace {

void squared_distances_scalar(std::span<const double> point, const double* columns,
                              std::size_t stride, std::size_t count, double* out) {
  const std::size_t dim = point.size();
  for (std::size_t j = 0; j < count; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      const double diff = columns[k * stride + j] - point[k];
      acc = acc + diff * diff;
    }
    out[j] = acc;
  }
}

EdgeLabelCounts count_edge_labels_scalar(std::span<const std::int32_t> tails,
                                         std::span<const std::int32_t> heads,
                                         std::span<const std::int32_t> labels) {
  EdgeLabelCounts c;
  for (std::size_t e = 0; e < tails.size(); ++e) {
    const std::int32_t a = labels[tails[e]];
    const std::int32_t b = labels[heads[e]];
    c.tt += static_cast<std::uint64_t>(a & b);
    c.tc += static_cast<std::uint64_t>(a & (b ^ 1));
    c.ct += static_cast<std::uint64_t>((a ^ 1) & b);
  }
  c.cc = tails.size() - c.tt - c.tc - c.ct;
  return c;
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{Isa::Scalar, &squared_distances_scalar,
                                 &count_edge_labels_scalar};
  return table;
}

}  // namespace covbal::simd
