#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "covbal/dataset.hpp"

namespace covbal {

enum class Metric { Euclidean, Precomputed };

struct DistanceOptions {
  // Scale each covariate to unit sample standard deviation (and centre it)
  // before computing distances. Constant columns are centred only.
  bool standardize = false;
  std::size_t threads = 0;
};

// Dense symmetric N x N matrix of non-negative finite distances with a zero
// diagonal.
class DistanceMatrix {
 public:
  // Validates square shape, finiteness, non-negativity, zero diagonal and
  // symmetry to `symmetry_tol` (absolute). The upper triangle is mirrored so
  // the stored matrix is exactly symmetric.
  DistanceMatrix(std::size_t n, std::vector<double> entries, Metric metric,
                 double symmetry_tol = 1e-9);

  std::size_t size() const { return n_; }
  Metric metric() const { return metric_; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {d_.data() + i * n_, n_}; }

 private:
  struct Unchecked {};
  DistanceMatrix(Unchecked, std::size_t n, std::vector<double> entries, Metric metric)
      : n_(n), d_(std::move(entries)), metric_(metric) {}
  friend DistanceMatrix pairwise_distances(const Dataset&, const DistanceOptions&);

  std::size_t n_;
  std::vector<double> d_;
  Metric metric_;
};

// Euclidean distances between all rows. Rows are filled in parallel through
// the active SIMD kernel; the result is bit-identical for any thread count or
// kernel variant.
DistanceMatrix pairwise_distances(const Dataset& d, const DistanceOptions& options = {});

// Reads an N x N CSV of numbers (no header). N must equal expected_n when it
// is non-zero.
DistanceMatrix read_distance_csv(std::istream& in, std::size_t expected_n = 0);
DistanceMatrix load_distance_csv(const std::filesystem::path& path, std::size_t expected_n = 0);

// c1: unordered mutual nearest-neighbour pairs. c2: unordered pairs of
// distinct nodes sharing their nearest neighbour.
struct NnCounts {
  std::uint64_t c1 = 0;
  std::uint64_t c2 = 0;
};

// Directed k-nearest-neighbour graph. Node i's out-edges are its k closest
// other nodes ordered by (distance, index); distance ties go to the lowest
// index. Edges are stored node-major: edge i * k + r runs tails()[.] = i to
// heads()[.] = r-th neighbour.
class NnGraph {
 public:
  NnGraph(std::size_t n, std::size_t k, std::vector<std::int32_t> heads);

  std::size_t size() const { return n_; }
  std::size_t k() const { return k_; }
  std::span<const std::int32_t> neighbors(std::size_t i) const {
    return {heads_.data() + i * k_, k_};
  }
  std::span<const std::int32_t> tails() const { return tails_; }
  std::span<const std::int32_t> heads() const { return heads_; }
  // Present only for k == 1.
  const std::optional<NnCounts>& counts() const { return counts_; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::int32_t> tails_;
  std::vector<std::int32_t> heads_;
  std::optional<NnCounts> counts_;
};

// Requires 1 <= k <= N - 1 (std::invalid_argument otherwise).
NnGraph build_knn(const DistanceMatrix& dm, std::size_t k = 1);

// Throws std::invalid_argument unless g.k() == 1.
NnCounts count_c1_c2(const NnGraph& g);

// Union of k successive edge-disjoint minimum spanning trees. Tree t is the
// Kruskal tree over all edges not used by trees 0..t-1, with edges ordered
// by (weight, smaller index, larger index). Edges are stored tree by tree
// with u < v; tree t occupies [t * (N - 1), (t + 1) * (N - 1)).
class MstForest {
 public:
  MstForest(std::size_t n, std::size_t k, std::vector<std::int32_t> u, std::vector<std::int32_t> v,
            std::vector<double> weights);

  std::size_t size() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t edge_count() const { return u_.size(); }
  std::span<const std::int32_t> tails() const { return u_; }
  std::span<const std::int32_t> heads() const { return v_; }
  std::span<const double> weights() const { return w_; }
  // Edges of tree t only.
  std::span<const std::int32_t> tree_tails(std::size_t t) const;
  std::span<const std::int32_t> tree_heads(std::size_t t) const;
  double tree_weight(std::size_t t) const;

  // Computed on the first tree.
  std::uint64_t c3() const { return c3_; }
  std::size_t max_degree() const { return max_degree_; }

 private:
  std::size_t n_;
  std::size_t k_;
  std::vector<std::int32_t> u_;
  std::vector<std::int32_t> v_;
  std::vector<double> w_;
  std::uint64_t c3_ = 0;
  std::size_t max_degree_ = 0;
};

// Requires k >= 1 and k * (N - 1) <= N (N - 1) / 2; throws
// std::invalid_argument if a tree cannot be completed from unused edges.
MstForest build_kmst(const DistanceMatrix& dm, std::size_t k = 1);

// Number of unordered edge pairs of the first tree that share a node:
// sum over nodes of deg (deg - 1) / 2.
std::uint64_t count_c3(const MstForest& f);

}  // namespace covbal
