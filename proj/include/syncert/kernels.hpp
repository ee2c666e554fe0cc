#pragma once

// Complex double-precision inner loops used by the dense linear algebra layer.
//
// Every kernel has a portable scalar reference implementation. On x86-64 an
// AVX2+FMA variant is compiled into a separate translation unit and selected
// at runtime when the CPU reports support. Both variants must agree to within
// rounding (FMA contraction changes the last bits); tests/test_kernels.cpp
// checks this on random inputs.

#include <complex>
#include <cstddef>
#include <string_view>

namespace syncert::kernels {

using cplx = std::complex<double>;

enum class Backend { Scalar, Avx2 };

/// Sum of conj(x[i]) * y[i].
using DotcFn = cplx (*)(std::size_t n, const cplx* x, const cplx* y);
/// y[i] += alpha * x[i].
using AxpyFn = void (*)(std::size_t n, cplx alpha, const cplx* x, cplx* y);
/// C (m x n) = A (m x k) * B (k x n), all row-major and contiguous.
using GemmFn = void (*)(std::size_t m, std::size_t k, std::size_t n, const cplx* a,
                        const cplx* b, cplx* c);

struct KernelTable {
  Backend backend;
  DotcFn dotc;
  AxpyFn axpy;
  GemmFn gemm;
};

namespace scalar {
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void gemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
          cplx* c);
}  // namespace scalar

#if defined(SYNCERT_HAVE_AVX2)
namespace avx2 {
cplx dotc(std::size_t n, const cplx* x, const cplx* y);
void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y);
void gemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
          cplx* c);
}  // namespace avx2
#endif

/// True when the AVX2 variant was compiled in and the running CPU supports it.
bool avx2_available();

/// The table currently used by the numerics layer.
const KernelTable& active();

/// Table for a specific backend. Requesting Avx2 when unavailable throws
/// std::runtime_error.
const KernelTable& table(Backend backend);

/// Overrides runtime selection (tests and benchmarks). Not thread-safe with
/// respect to concurrent numerics calls.
void force_backend(Backend backend);

/// Restores CPU-based selection.
void reset_backend();

std::string_view backend_name(Backend backend);

}  // namespace syncert::kernels
