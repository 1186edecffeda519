#include "covbal/test_result.hpp"

#include <stdexcept>

namespace covbal {

const char* mode_name(PValueMode mode) {
  switch (mode) {
    case PValueMode::Auto: return "auto";
    case PValueMode::Asymptotic: return "asymptotic";
    case PValueMode::Permutation: return "permutation";
    case PValueMode::Both: return "both";
  }
  return "unknown";
}

PValueMode resolve_mode(const TestOptions& options, std::size_t n) {
  if (options.k < 1) throw std::invalid_argument("k must be at least 1");
  PValueMode mode = options.mode;
  if (options.k > 1) {
    if (mode == PValueMode::Asymptotic || mode == PValueMode::Both) {
      throw std::invalid_argument("no asymptotic null distribution for k > 1; use permutation mode");
    }
    mode = PValueMode::Permutation;
  } else if (mode == PValueMode::Auto) {
    mode = n >= 100 ? PValueMode::Asymptotic : PValueMode::Both;
  }
  if (mode != PValueMode::Asymptotic && options.n_perm < 100) {
    throw std::invalid_argument("n_perm = " + std::to_string(options.n_perm) +
                                " is too small for a permutation p-value (need >= 100)");
  }
  return mode;
}

}  // namespace covbal
