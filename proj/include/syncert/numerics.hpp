#pragma once

// Dense complex linear algebra: matrices and vectors, Kronecker products,
// vec/mat reshaping, Hermitian eigendecomposition, partial traces, Schmidt
// decompositions and the state seminorm ||x||_rho = sqrt(Tr(rho x^* x)).
//
// Conventions
//   * Matrices are row-major.
//   * tensor(a, b) has entry (i*b.rows()+k, j*b.cols()+l) = a(i,j) * b(k,l).
//   * vec() stacks rows, vec(M)[i*d+j] = M(i,j). With this convention
//     vec(A B C) = (A (x) C^T) vec(B), and a bipartite vector v on dA*dB has
//     v[i*dB+j] = mat(v)(i,j).

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "syncert/errors.hpp"

namespace syncert {

using cplx = std::complex<double>;

class CVector {
 public:
  CVector() = default;
  explicit CVector(std::size_t dim) : data_(dim, cplx(0.0, 0.0)) {}
  explicit CVector(std::vector<cplx> entries) : data_(std::move(entries)) {}
  CVector(std::initializer_list<cplx> entries) : data_(entries) {}

  static CVector basis(std::size_t dim, std::size_t index);

  std::size_t size() const noexcept { return data_.size(); }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::span<const cplx> entries() const noexcept { return data_; }

  double norm() const;
  CVector normalized() const;
  /// |norm - 1| <= tol.
  bool is_unit(double tol = 1e-12) const;

  CVector& operator+=(const CVector& other);
  CVector& operator-=(const CVector& other);
  CVector& operator*=(cplx s);

  friend CVector operator+(CVector a, const CVector& b) { return a += b; }
  friend CVector operator-(CVector a, const CVector& b) { return a -= b; }
  friend CVector operator*(cplx s, CVector a) { return a *= s; }
  friend CVector operator*(CVector a, cplx s) { return a *= s; }

 private:
  std::vector<cplx> data_;
};

/// <a|b>, antilinear in the first argument.
cplx inner(const CVector& a, const CVector& b);

class CMatrix {
 public:
  CMatrix() = default;
  CMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, cplx(0.0, 0.0)) {}
  CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);
  /// Row-wise literal, e.g. CMatrix{{1, 0}, {0, -1}}.
  CMatrix(std::initializer_list<std::initializer_list<cplx>> rows);

  static CMatrix identity(std::size_t n);
  static CMatrix zeros(std::size_t rows, std::size_t cols) { return {rows, cols}; }
  static CMatrix diagonal(std::span<const cplx> diag);
  static CMatrix diagonal(std::initializer_list<cplx> diag);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  cplx* data() noexcept { return data_.data(); }
  const cplx* data() const noexcept { return data_.data(); }
  std::span<const cplx> entries() const noexcept { return data_; }

  CMatrix adjoint() const;
  CMatrix transpose() const;
  CMatrix conjugate() const;
  cplx trace() const;
  double frobenius_norm() const;
  /// ||M - M^*||_F <= rel_tol * ||M||_F.
  bool is_hermitian(double rel_tol = 1e-12) const;

  CMatrix& operator+=(const CMatrix& other);
  CMatrix& operator-=(const CMatrix& other);
  CMatrix& operator*=(cplx s);

  friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
  friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
  friend CMatrix operator*(cplx s, CMatrix a) { return a *= s; }
  friend CMatrix operator*(CMatrix a, cplx s) { return a *= s; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

CMatrix operator*(const CMatrix& a, const CMatrix& b);
CVector operator*(const CMatrix& m, const CVector& v);

/// |a><b|
CMatrix outer(const CVector& a, const CVector& b);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Kronecker product.
CMatrix tensor(const CMatrix& a, const CMatrix& b);
CVector tensor(const CVector& a, const CVector& b);

/// Row-stacking of a square matrix; throws DimensionError on non-square input.
CVector vec(const CMatrix& m);
/// Inverse of vec(); the length must be a perfect square.
CMatrix mat(const CVector& v);
/// Reshape a bipartite vector into a rows x cols coefficient matrix.
CMatrix mat(const CVector& v, std::size_t rows, std::size_t cols);

struct EigenSystem {
  std::vector<double> values;    // descending
  std::vector<CVector> vectors;  // orthonormal, first non-negligible entry real positive
};

/// Hermitian eigendecomposition. Throws std::invalid_argument when
/// ||M - M^*||_F > 1e-12 ||M||_F.
EigenSystem eigh(const CMatrix& m);

struct SingularSystem {
  CMatrix u;                  // rows x r
  std::vector<double> values; // r = min(rows, cols), descending
  CMatrix v;                  // cols x r, m = u diag(values) v^*
};

SingularSystem svd(const CMatrix& m);

/// U V^* from the thin SVD; an isometry when rows >= cols, a co-isometry otherwise.
CMatrix polar_factor(const CMatrix& m);

/// Positive semidefinite square root of a Hermitian PSD matrix (negative
/// eigenvalues within rounding are clamped).
CMatrix psd_sqrt(const CMatrix& m);

enum class Side { A, B };

/// Partial trace of an operator on C^dimA (x) C^dimB, keeping the given side.
CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Side keep);

class DensityMatrix {
 public:
  static constexpr double kTolerance = 1e-10;

  /// Validates positivity (min eigenvalue >= -tol) and unit trace.
  explicit DensityMatrix(CMatrix m, double tol = kTolerance);
  static DensityMatrix from_pure(const CVector& psi);
  static DensityMatrix maximally_mixed(std::size_t dim);

  std::size_t dim() const noexcept { return m_.rows(); }
  const CMatrix& matrix() const noexcept { return m_; }

 private:
  CMatrix m_;
};

/// sqrt(Tr(rho x^* x)).
double rho_seminorm(const CMatrix& x, const DensityMatrix& rho);

struct SchmidtDecomposition {
  std::vector<double> coefficients;  // descending, min(dimA, dimB) entries
  std::vector<CVector> left;         // orthonormal in C^dimA
  std::vector<CVector> right;        // orthonormal in C^dimB

  /// Number of coefficients above rel_tol * largest.
  std::size_t rank(double rel_tol = 1e-10) const;
};

/// v = sum_i s_i left_i (x) right_i.
SchmidtDecomposition schmidt(const CVector& v, std::size_t dim_a, std::size_t dim_b);

/// Permutes a vector on (dA*sA) (x) (dB*sB), index ((k*sA+j), (l*sB+j')), into
/// the regrouped layout (dA (x) dB) (x) (sA (x) sB), index ((k*dB+l), (j*sB+j')).
CVector regroup_to_ideal_junk(const CVector& v, std::size_t dim_a, std::size_t junk_a,
                              std::size_t dim_b, std::size_t junk_b);
/// Inverse permutation of regroup_to_ideal_junk.
CVector regroup_to_parties(const CVector& v, std::size_t dim_a, std::size_t junk_a,
                           std::size_t dim_b, std::size_t junk_b);

}  // namespace syncert
