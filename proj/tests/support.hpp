#pragma once

// Independent reference computations for the unit tests. Everything here is
// written with plain loops and avoids the library's kernels and Eigen paths.

#include <cmath>
#include <complex>
#include <vector>

#include "syncert/numerics.hpp"
#include "syncert/random.hpp"

namespace testing {

using syncert::cplx;
using syncert::CMatrix;
using syncert::CVector;

inline CMatrix naive_mul(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      cplx s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline CVector naive_apply(const CMatrix& a, const CVector& v) {
  CVector out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) out[i] += a(i, k) * v[k];
  return out;
}

inline CMatrix naive_kron(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          c(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return c;
}

inline cplx naive_inner(const CVector& a, const CVector& b) {
  cplx s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// Max entrywise modulus of a - b.
inline double max_abs_diff(const CMatrix& a, const CMatrix& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

inline double max_abs_diff(const CVector& a, const CVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

/// Coefficients c_0..c_n of det(lambda I - A) = sum c_k lambda^(n-k) by the
/// Faddeev-LeVerrier recursion.
inline std::vector<cplx> characteristic_polynomial(const CMatrix& a) {
  const std::size_t n = a.rows();
  std::vector<cplx> c(n + 1);
  c[0] = 1.0;
  CMatrix m(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    CMatrix next = naive_mul(a, m);
    for (std::size_t i = 0; i < n; ++i) next(i, i) += c[k - 1];
    m = next;
    const CMatrix am = naive_mul(a, m);
    cplx tr = 0;
    for (std::size_t i = 0; i < n; ++i) tr += am(i, i);
    c[k] = -tr / static_cast<double>(k);
  }
  return c;
}

inline cplx eval_poly(const std::vector<cplx>& c, cplx x) {
  cplx r = 0;
  for (const auto& ck : c) r = r * x + ck;
  return r;
}

/// Random projective measurement on C^d with the given ranks (summing to d).
inline std::vector<CMatrix> random_projective(const std::vector<std::size_t>& ranks,
                                              syncert::Rng& rng) {
  std::size_t d = 0;
  for (auto r : ranks) d += r;
  const CMatrix u = syncert::haar_unitary(d, rng);
  std::vector<CMatrix> out;
  std::size_t col = 0;
  for (auto r : ranks) {
    CMatrix p(d, d);
    for (std::size_t c = col; c < col + r; ++c)
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) += u(i, c) * std::conj(u(j, c));
    out.push_back(p);
    col += r;
  }
  return out;
}

}  // namespace testing
