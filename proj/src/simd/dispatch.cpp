#include <cstdlib>
#include <string_view>

#include "covbal/simd/kernels.hpp"

namespace covbal::simd {

#if defined(COVBAL_HAVE_AVX2)
const KernelTable& avx2_kernels_table();
#endif
#if defined(COVBAL_HAVE_NEON)
const KernelTable& neon_kernels_table();
#endif

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::Scalar: return "scalar";
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
  }
  return "unknown";
}

const KernelTable* kernels_for(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return &scalar_kernels();
    case Isa::Avx2:
#if defined(COVBAL_HAVE_AVX2)
      if (__builtin_cpu_supports("avx2")) return &avx2_kernels_table();
#endif
      return nullptr;
    case Isa::Neon:
#if defined(COVBAL_HAVE_NEON)
      return &neon_kernels_table();  // baseline on aarch64
#else
      return nullptr;
#endif
  }
  return nullptr;
}

namespace {

const KernelTable& select_kernels() {
  if (const char* forced = std::getenv("COVBAL_SIMD")) {
    const std::string_view name(forced);
    for (Isa isa : {Isa::Scalar, Isa::Avx2, Isa::Neon}) {
      if (name == isa_name(isa)) {
        const KernelTable* t = kernels_for(isa);
        return t ? *t : scalar_kernels();
      }
    }
  }
  for (Isa isa : {Isa::Avx2, Isa::Neon}) {
    if (const KernelTable* t = kernels_for(isa)) return *t;
  }
  return scalar_kernels();
}

}  // namespace

const KernelTable& active_kernels() {
  static const KernelTable& table = select_kernels();
  return table;
}

}  // namespace covbal::simd
