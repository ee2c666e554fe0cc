#include <atomic>
#include <cstdlib>
#include <stdexcept>

#include "syncert/kernels.hpp"

namespace syncert::kernels {

namespace {

constexpr KernelTable kScalarTable{Backend::Scalar, &scalar::dotc, &scalar::axpy,
                                   &scalar::gemm};
#if defined(SYNCERT_HAVE_AVX2)
constexpr KernelTable kAvx2Table{Backend::Avx2, &avx2::dotc, &avx2::axpy, &avx2::gemm};
#endif

bool detect_avx2() {
#if defined(SYNCERT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* select_default() {
  if (const char* v = std::getenv("SYNCERT_FORCE_SCALAR"); v != nullptr && *v != '\0' && *v != '0')
    return &kScalarTable;
#if defined(SYNCERT_HAVE_AVX2)
  if (detect_avx2()) return &kAvx2Table;
#endif
  return &kScalarTable;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> ptr{select_default()};
  return ptr;
}

}  // namespace

bool avx2_available() {
  static const bool available = detect_avx2();
  return available;
}

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

const KernelTable& table(Backend backend) {
  switch (backend) {
    case Backend::Scalar:
      return kScalarTable;
    case Backend::Avx2:
#if defined(SYNCERT_HAVE_AVX2)
      if (avx2_available()) return kAvx2Table;
#endif
      throw std::runtime_error("AVX2 kernels are not available on this machine");
  }
  throw std::logic_error("unknown kernel backend");
}

void force_backend(Backend backend) {
  current().store(&table(backend), std::memory_order_release);
}

void reset_backend() { current().store(select_default(), std::memory_order_release); }

std::string_view backend_name(Backend backend) {
  return backend == Backend::Avx2 ? "avx2" : "scalar";
}

}  // namespace syncert::kernels
