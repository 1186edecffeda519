#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "covbal/graphs.hpp"
#include "covbal/parallel.hpp"

namespace covbal {

NnGraph::NnGraph(std::size_t n, std::size_t k, std::vector<std::int32_t> heads)
    : n_(n), k_(k), heads_(std::move(heads)) {
  if (heads_.size() != n_ * k_) throw std::invalid_argument("NnGraph: edge count != n * k");
  tails_.resize(heads_.size());
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t r = 0; r < k_; ++r) {
      tails_[i * k_ + r] = static_cast<std::int32_t>(i);
      const std::int32_t h = heads_[i * k_ + r];
      if (h < 0 || static_cast<std::size_t>(h) >= n_ || static_cast<std::size_t>(h) == i) {
        throw std::invalid_argument("NnGraph: invalid neighbour of node " + std::to_string(i));
      }
    }
  }
  if (k_ == 1) counts_ = count_c1_c2(*this);
}

NnGraph build_knn(const DistanceMatrix& dm, std::size_t k) {
  const std::size_t n = dm.size();
  if (k < 1 || k + 1 > n) {
    throw std::invalid_argument("build_knn: k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(n > 0 ? n - 1 : 0) + "]");
  }
  std::vector<std::int32_t> heads(n * k);
  parallel_for(n, 0, [&](std::size_t begin, std::size_t end) {
    std::vector<std::int32_t> order;
    for (std::size_t i = begin; i < end; ++i) {
      const auto row = dm.row(i);
      if (k == 1) {
        std::size_t best = i == 0 ? 1 : 0;
        for (std::size_t j = best + 1; j < n; ++j) {
          if (j != i && row[j] < row[best]) best = j;
        }
        heads[i] = static_cast<std::int32_t>(best);
        continue;
      }
      order.resize(n - 1);
      std::size_t pos = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) order[pos++] = static_cast<std::int32_t>(j);
      }
      std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                        [&](std::int32_t a, std::int32_t b) {
                          return row[a] < row[b] || (row[a] == row[b] && a < b);
                        });
      std::copy_n(order.begin(), k, heads.begin() + static_cast<std::ptrdiff_t>(i * k));
    }
  });
  return NnGraph(n, k, std::move(heads));
}

NnCounts count_c1_c2(const NnGraph& g) {
  if (g.k() != 1) {
    throw std::invalid_argument("count_c1_c2: defined for k = 1 only, graph has k = " +
                                std::to_string(g.k()));
  }
  const auto nn = g.heads();
  const std::size_t n = g.size();
  NnCounts c;
  std::vector<std::uint64_t> indegree(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(nn[i]);
    ++indegree[j];
    if (i < j && static_cast<std::size_t>(nn[j]) == i) ++c.c1;
  }
  for (std::uint64_t d : indegree) {
    if (d > 1) c.c2 += d * (d - 1) / 2;
  }
  return c;
}

}  // namespace covbal
