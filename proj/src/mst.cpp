#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "covbal/graphs.hpp"

namespace covbal {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), rank_(n, 0) { reset(); }

  void reset() {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
    std::fill(rank_.begin(), rank_.end(), 0);
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (rank_[a] < rank_[b]) std::swap(a, b);
    parent_[b] = a;
    if (rank_[a] == rank_[b]) ++rank_[a];
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<int> rank_;
};

struct WeightedEdge {
  double w;
  std::int32_t u;
  std::int32_t v;
};

}  // namespace

MstForest::MstForest(std::size_t n, std::size_t k, std::vector<std::int32_t> u,
                     std::vector<std::int32_t> v, std::vector<double> weights)
    : n_(n), k_(k), u_(std::move(u)), v_(std::move(v)), w_(std::move(weights)) {
  if (n_ < 2 || u_.size() != k_ * (n_ - 1) || v_.size() != u_.size() || w_.size() != u_.size()) {
    throw std::invalid_argument("MstForest: expected k * (N - 1) edges");
  }
  std::vector<std::uint64_t> degree(n_, 0);
  for (std::size_t e = 0; e + 1 < n_; ++e) {
    ++degree[static_cast<std::size_t>(u_[e])];
    ++degree[static_cast<std::size_t>(v_[e])];
  }
  for (std::uint64_t d : degree) {
    if (d > 1) c3_ += d * (d - 1) / 2;
    max_degree_ = std::max<std::size_t>(max_degree_, d);
  }
}

std::span<const std::int32_t> MstForest::tree_tails(std::size_t t) const {
  return std::span<const std::int32_t>(u_).subspan(t * (n_ - 1), n_ - 1);
}

std::span<const std::int32_t> MstForest::tree_heads(std::size_t t) const {
  return std::span<const std::int32_t>(v_).subspan(t * (n_ - 1), n_ - 1);
}

double MstForest::tree_weight(std::size_t t) const {
  const auto w = std::span<const double>(w_).subspan(t * (n_ - 1), n_ - 1);
  return std::accumulate(w.begin(), w.end(), 0.0);
}

MstForest build_kmst(const DistanceMatrix& dm, std::size_t k) {
  const std::size_t n = dm.size();
  if (n < 2) throw std::invalid_argument("build_kmst: need at least 2 nodes");
  if (k < 1 || k * (n - 1) > n * (n - 1) / 2) {
    throw std::invalid_argument("build_kmst: k = " + std::to_string(k) +
                                " edge-disjoint spanning trees cannot fit in K_" +
                                std::to_string(n));
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      edges.push_back({dm(i, j), static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
    }
  }
  std::sort(edges.begin(), edges.end(), [](const WeightedEdge& a, const WeightedEdge& b) {
    if (a.w != b.w) return a.w < b.w;
    if (a.u != b.u) return a.u < b.u;
    return a.v < b.v;
  });

  std::vector<char> used(edges.size(), 0);
  std::vector<std::int32_t> us, vs;
  std::vector<double> ws;
  us.reserve(k * (n - 1));
  vs.reserve(k * (n - 1));
  ws.reserve(k * (n - 1));
  DisjointSets sets(n);
  for (std::size_t t = 0; t < k; ++t) {
    sets.reset();
    std::size_t added = 0;
    for (std::size_t e = 0; e < edges.size() && added + 1 < n; ++e) {
      if (used[e]) continue;
      if (sets.unite(static_cast<std::size_t>(edges[e].u), static_cast<std::size_t>(edges[e].v))) {
        used[e] = 1;
        us.push_back(edges[e].u);
        vs.push_back(edges[e].v);
        ws.push_back(edges[e].w);
        ++added;
      }
    }
    if (added + 1 != n) {
      throw std::invalid_argument("build_kmst: tree " + std::to_string(t + 1) +
                                  " cannot span the remaining edges; k = " + std::to_string(k) +
                                  " is too large");
    }
  }
  return MstForest(n, k, std::move(us), std::move(vs), std::move(ws));
}

std::uint64_t count_c3(const MstForest& f) { return f.c3(); }

}  // namespace covbal
