#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "covbal/dataset.hpp"
#include "covbal/parallel.hpp"

namespace covbal {

// A reproducible family of equal-split relabelings: replicate r is a uniform
// draw over the C(n, n_treated) labelings, fully determined by (seed, r).
struct PermutationPlan {
  std::size_t n = 0;
  std::size_t n_treated = 0;
  std::size_t n_perm = 0;
  std::uint64_t seed = 0;
};

// Throws std::out_of_range when r >= plan.n_perm, std::invalid_argument when
// n_treated > n.
std::vector<Group> sample_labeling(const PermutationPlan& plan, std::size_t r);

// Allocation-free variant for the permutation loop. labels receives 1 for
// treated, 0 for control; scratch is resized to plan.n.
void sample_labeling_into(const PermutationPlan& plan, std::size_t r,
                          std::span<std::int32_t> labels, std::vector<std::uint32_t>& scratch);

// Converts group labels to the 0/1 int32 layout the kernels read.
std::vector<std::int32_t> label_indicator(std::span<const Group> labels);

enum class Tail { Lower, Upper };

struct PermutationPValue {
  double p = 1.0;
  std::size_t n_perm = 0;
  std::uint64_t seed = 0;
  std::size_t extreme = 0;  // replicates at least as extreme as observed
};

// Add-one Monte-Carlo p-value (1 + #extreme) / (1 + n_perm); extreme means
// statistic <= observed for Tail::Lower and >= observed for Tail::Upper.
// statistic(labels) must be a pure function of the labeling returning an
// exact integer, so the result does not depend on the thread count.
template <class Statistic>
PermutationPValue permutation_pvalue(const PermutationPlan& plan, Statistic&& statistic,
                                     std::int64_t observed, Tail tail, std::size_t threads = 0) {
  const std::size_t workers = std::max<std::size_t>(1, resolve_threads(threads));
  std::vector<std::size_t> partial(workers, 0);
  const std::size_t chunk = (plan.n_perm + workers - 1) / std::max<std::size_t>(1, workers);
  parallel_for(workers, workers, [&](std::size_t wb, std::size_t we) {
    std::vector<std::int32_t> labels(plan.n);
    std::vector<std::uint32_t> scratch;
    for (std::size_t w = wb; w < we; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(plan.n_perm, begin + chunk);
      std::size_t count = 0;
      for (std::size_t r = begin; r < end; ++r) {
        sample_labeling_into(plan, r, labels, scratch);
        const std::int64_t s = statistic(std::span<const std::int32_t>(labels));
        count += tail == Tail::Lower ? (s <= observed) : (s >= observed);
      }
      partial[w] = count;
    }
  });
  PermutationPValue out;
  out.n_perm = plan.n_perm;
  out.seed = plan.seed;
  for (std::size_t c : partial) out.extreme += c;
  out.p = (1.0 + static_cast<double>(out.extreme)) / (1.0 + static_cast<double>(plan.n_perm));
  return out;
}

}  // namespace covbal
