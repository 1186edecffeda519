#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "covbal/permutation.hpp"

namespace covbal {

enum class PValueMode {
  Auto,         // asymptotic for N >= 100, both below; permutation for k > 1
  Asymptotic,
  Permutation,
  Both,
};

const char* mode_name(PValueMode mode);

struct TestOptions {
  PValueMode mode = PValueMode::Auto;
  std::size_t k = 1;
  std::size_t n_perm = 10000;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
};

// Outcome of CrossNN or CrossMST on one dataset.
struct TestResult {
  std::string test;  // "crossnn" or "crossmst"
  std::size_t k = 1;
  std::size_t n = 0;
  std::size_t dim = 0;

  // (D12, D21) for CrossNN, (R1, R2) for CrossMST.
  std::array<std::uint64_t, 2> raw_counts{};

  // k == 1: Z_D = min of the standardized counts (CrossNN) or Z_R = max
  // (CrossMST). k > 1: the raw min (CrossNN) or max (CrossMST) count.
  double statistic = 0.0;

  // Null moments and standardized components; k == 1 only.
  std::optional<std::array<double, 2>> component_z;
  std::optional<double> mean;
  std::optional<double> variance;
  std::optional<double> rho;

  std::optional<double> p_asymptotic;
  std::optional<PermutationPValue> permutation;

  // Graph summaries feeding the moments (k == 1) and diagnostics.
  std::optional<std::uint64_t> c1;
  std::optional<std::uint64_t> c2;
  std::optional<std::uint64_t> c3;
  std::optional<std::size_t> max_degree;
  std::size_t edge_count = 0;
};

// Resolves Auto and rejects impossible combinations (asymptotic inference for
// k > 1, fewer than 100 permutations) with std::invalid_argument.
PValueMode resolve_mode(const TestOptions& options, std::size_t n);

}  // namespace covbal
