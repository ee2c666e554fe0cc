#include "syncert/kernels.hpp"

namespace syncert::kernels::scalar {

cplx dotc(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

void axpy(std::size_t n, cplx alpha, const cplx* x, cplx* y) {
  const double ar = alpha.real(), ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] = cplx(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
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

}  // namespace syncert::kernels::scalar
