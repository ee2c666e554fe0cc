// Compiled with -mavx2 -mfma. Nothing in here may be called unless
// avx2_available() returned true.

#include <immintrin.h>

#include "syncert/kernels.hpp"

namespace syncert::kernels::avx2 {

namespace {

// Two interleaved complex doubles per register: [re0, im0, re1, im1].
inline __m256d load2(const cplx* p) {
  return _mm256_loadu_pd(reinterpret_cast<const double*>(p));
}

inline void store2(cplx* p, __m256d v) {
  _mm256_storeu_pd(reinterpret_cast<double*>(p), v);
}

}  // namespace

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  // sum_rr accumulates [xr*yr, xi*yi, ...]; sum_ri accumulates [xr*yi, xi*yr, ...].
  __m256d sum_rr0 = _mm256_setzero_pd();
  __m256d sum_ri0 = _mm256_setzero_pd();
  __m256d sum_rr1 = _mm256_setzero_pd();
  __m256d sum_ri1 = _mm256_setzero_pd();

  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x0 = load2(x + i);
    const __m256d y0 = load2(y + i);
    const __m256d x1 = load2(x + i + 2);
    const __m256d y1 = load2(y + i + 2);
    sum_rr0 = _mm256_fmadd_pd(x0, y0, sum_rr0);
    sum_ri0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), sum_ri0);
    sum_rr1 = _mm256_fmadd_pd(x1, y1, sum_rr1);
    sum_ri1 = _mm256_fmadd_pd(x1, _mm256_permute_pd(y1, 0b0101), sum_ri1);
  }
  for (; i + 2 <= n; i += 2) {
    const __m256d x0 = load2(x + i);
    const __m256d y0 = load2(y + i);
    sum_rr0 = _mm256_fmadd_pd(x0, y0, sum_rr0);
    sum_ri0 = _mm256_fmadd_pd(x0, _mm256_permute_pd(y0, 0b0101), sum_ri0);
  }
  const __m256d rr = _mm256_add_pd(sum_rr0, sum_rr1);
  const __m256d ri = _mm256_add_pd(sum_ri0, sum_ri1);

  alignas(32) double trr[4];
  alignas(32) double tri[4];
  _mm256_store_pd(trr, rr);
  _mm256_store_pd(tri, ri);
  double re = (trr[0] + trr[1]) + (trr[2] + trr[3]);
  double im = (tri[0] - tri[1]) + (tri[2] - tri[3]);

  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = load2(x + i);
    const __m256d t = _mm256_mul_pd(ai, _mm256_permute_pd(xv, 0b0101));
    // even lanes: ar*xr - ai*xi, odd lanes: ar*xi + ai*xr
    const __m256d prod = _mm256_fmaddsub_pd(ar, xv, t);
    store2(y + i, _mm256_add_pd(load2(y + i), prod));
  }
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + alpha.real() * xr - alpha.imag() * xi,
                y[i].imag() + alpha.real() * xi + alpha.imag() * xr);
  }
}

void gemm(std::size_t m, std::size_t k, std::size_t n, const cplx* a, const cplx* b,
          cplx* c) {
  for (std::size_t i = 0; i < m * n; ++i) c[i] = cplx(0.0, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    cplx* crow = c + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const cplx aip = a[i * k + p];
      if (aip == cplx(0.0, 0.0)) continue;
      axpy(n, aip, b + p * n, crow);
    }
  }
}

}  // namespace syncert::kernels::avx2
