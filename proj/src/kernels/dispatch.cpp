#include <atomic>
#include <cstdlib>
#include <string_view>

#include "kernels_impl.hpp"
#include "qst/kernels.hpp"

namespace qst::kernels {

namespace {

const KernelSet kScalar{"scalar", &detail::dot_scalar, &detail::axpy_scalar,
                        &detail::cgemm_scalar};

#ifdef QST_HAVE_AVX2
const KernelSet kAvx2{"avx2", &detail::dot_avx2, &detail::axpy_avx2,
                      &detail::cgemm_avx2};

bool cpu_has_avx2() {
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}
#endif

const KernelSet* select_default() {
  const char* forced = std::getenv("QST_KERNELS");
  if (forced != nullptr && std::string_view(forced) == "scalar") return &kScalar;
  if (const KernelSet* v = avx2()) return v;
  return &kScalar;
}

std::atomic<const KernelSet*>& slot() {
  static std::atomic<const KernelSet*> s{select_default()};
  return s;
}

}  // namespace

const KernelSet& scalar() { return kScalar; }

const KernelSet* avx2() {
#ifdef QST_HAVE_AVX2
  static const bool ok = cpu_has_avx2();
  return ok ? &kAvx2 : nullptr;
#else
  return nullptr;
#endif
}

const KernelSet& active() { return *slot().load(std::memory_order_relaxed); }

void set_active(const KernelSet& set) { slot().store(&set, std::memory_order_relaxed); }

}  // namespace qst::kernels
