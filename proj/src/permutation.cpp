#include "covbal/permutation.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "covbal/random.hpp"

namespace covbal {

namespace {
constexpr std::uint64_t kPermutationStream = 0x7065726dULL;  // "perm"
}

void sample_labeling_into(const PermutationPlan& plan, std::size_t r,
                          std::span<std::int32_t> labels, std::vector<std::uint32_t>& scratch) {
  if (r >= plan.n_perm) throw std::out_of_range("sample_labeling: replicate index out of range");
  if (plan.n_treated > plan.n) throw std::invalid_argument("sample_labeling: n_treated > n");
  if (labels.size() != plan.n) throw std::invalid_argument("sample_labeling: label buffer size");
  scratch.resize(plan.n);
  std::iota(scratch.begin(), scratch.end(), 0u);
  Rng rng(derive_seed(plan.seed, {kPermutationStream, r}));
  for (std::size_t i = 0; i < plan.n_treated; ++i) {
    const std::size_t j = i + rng.below(plan.n - i);
    std::swap(scratch[i], scratch[j]);
  }
  std::fill(labels.begin(), labels.end(), 0);
  for (std::size_t i = 0; i < plan.n_treated; ++i) labels[scratch[i]] = 1;
}

std::vector<Group> sample_labeling(const PermutationPlan& plan, std::size_t r) {
  std::vector<std::int32_t> labels(plan.n);
  std::vector<std::uint32_t> scratch;
  sample_labeling_into(plan, r, labels, scratch);
  std::vector<Group> out(plan.n);
  std::transform(labels.begin(), labels.end(), out.begin(),
                 [](std::int32_t x) { return x ? Group::Treated : Group::Control; });
  return out;
}

std::vector<std::int32_t> label_indicator(std::span<const Group> labels) {
  std::vector<std::int32_t> out(labels.size());
  std::transform(labels.begin(), labels.end(), out.begin(),
                 [](Group g) { return g == Group::Treated ? 1 : 0; });
  return out;
}

}  // namespace covbal
