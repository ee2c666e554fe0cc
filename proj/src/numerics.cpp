#include "syncert/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "eigen_bridge.hpp"
#include "syncert/kernels.hpp"
#include "syncert/random.hpp"

namespace syncert {

namespace {

std::string shape(const CMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

void fix_phase(CVector& v) {
  double largest = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) largest = std::max(largest, std::abs(v[i]));
  const double cutoff = 1e-10 * std::max(largest, 1e-300);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > cutoff) {
      const cplx phase = std::conj(v[i]) / mag;
      v *= phase;
      v[i] = cplx(mag, 0.0);
      return;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------- CVector

CVector CVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("basis index out of range");
  CVector v(dim);
  v[index] = 1.0;
  return v;
}

double CVector::norm() const { return std::sqrt(std::max(0.0, inner(*this, *this).real())); }

CVector CVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  return (1.0 / n) * CVector(*this);
}

bool CVector::is_unit(double tol) const { return std::abs(norm() - 1.0) <= tol; }

CVector& CVector::operator+=(const CVector& other) {
  if (other.size() != size()) throw DimensionError("vector sizes differ");
  kernels::active().axpy(size(), cplx(1.0, 0.0), other.data(), data());
  return *this;
}

CVector& CVector::operator-=(const CVector& other) {
  if (other.size() != size()) throw DimensionError("vector sizes differ");
  kernels::active().axpy(size(), cplx(-1.0, 0.0), other.data(), data());
  return *this;
}

CVector& CVector::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

cplx inner(const CVector& a, const CVector& b) {
  if (a.size() != b.size()) throw DimensionError("inner product of vectors with different sizes");
  return kernels::active().dotc(a.size(), a.data(), b.data());
}

// ---------------------------------------------------------------- CMatrix

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw DimensionError("entry count " + std::to_string(data_.size()) + " does not match " +
                         std::to_string(rows) + "x" + std::to_string(cols));
}

CMatrix::CMatrix(std::initializer_list<std::initializer_list<cplx>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& row : rows) {
    if (row.size() != cols_) throw DimensionError("ragged matrix literal");
    data_.insert(data_.end(), row.begin(), row.end());
  }
}

CMatrix CMatrix::identity(std::size_t n) {
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

CMatrix CMatrix::diagonal(std::span<const cplx> diag) {
  CMatrix m(diag.size(), diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
  return m;
}

CMatrix CMatrix::diagonal(std::initializer_list<cplx> diag) {
  return diagonal(std::span<const cplx>(diag.begin(), diag.size()));
}

CMatrix CMatrix::adjoint() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
  return out;
}

CMatrix CMatrix::transpose() const {
  CMatrix out(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
  return out;
}

CMatrix CMatrix::conjugate() const {
  CMatrix out(*this);
  for (auto& z : out.data_) z = std::conj(z);
  return out;
}

cplx CMatrix::trace() const {
  if (!is_square()) throw DimensionError("trace of non-square " + shape(*this) + " matrix");
  cplx t = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
  return t;
}

double CMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const auto& z : data_) s += std::norm(z);
  return std::sqrt(s);
}

bool CMatrix::is_hermitian(double rel_tol) const {
  if (!is_square()) return false;
  double asym = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      asym += std::norm((*this)(i, j) - std::conj((*this)(j, i)));
  return std::sqrt(asym) <= rel_tol * frobenius_norm();
}

CMatrix& CMatrix::operator+=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw DimensionError("cannot add " + shape(other) + " to " + shape(*this));
  kernels::active().axpy(data_.size(), cplx(1.0, 0.0), other.data(), data());
  return *this;
}

CMatrix& CMatrix::operator-=(const CMatrix& other) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw DimensionError("cannot subtract " + shape(other) + " from " + shape(*this));
  kernels::active().axpy(data_.size(), cplx(-1.0, 0.0), other.data(), data());
  return *this;
}

CMatrix& CMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows())
    throw DimensionError("cannot multiply " + shape(a) + " by " + shape(b));
  CMatrix c(a.rows(), b.cols());
  kernels::active().gemm(a.rows(), a.cols(), b.cols(), a.data(), b.data(), c.data());
  return c;
}

CVector operator*(const CMatrix& m, const CVector& v) {
  if (m.cols() != v.size())
    throw DimensionError("cannot apply " + shape(m) + " matrix to vector of size " +
                         std::to_string(v.size()));
  CVector out(m.rows());
  kernels::active().gemm(m.rows(), m.cols(), 1, m.data(), v.data(), out.data());
  return out;
}

CMatrix outer(const CVector& a, const CVector& b) {
  CMatrix m(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

double operator_norm(const CMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  const auto values = svd(m).values;
  return values.empty() ? 0.0 : values.front();
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      if (aij == cplx(0.0, 0.0)) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

CVector tensor(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < b.size(); ++k) out[i * b.size() + k] = a[i] * b[k];
  return out;
}

CVector vec(const CMatrix& m) {
  if (!m.is_square()) throw DimensionError("vec of non-square " + shape(m) + " matrix");
  return CVector(std::vector<cplx>(m.entries().begin(), m.entries().end()));
}

CMatrix mat(const CVector& v) {
  const auto d = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(v.size()))));
  if (d * d != v.size())
    throw DimensionError("mat: length " + std::to_string(v.size()) + " is not a perfect square");
  return mat(v, d, d);
}

CMatrix mat(const CVector& v, std::size_t rows, std::size_t cols) {
  if (rows * cols != v.size())
    throw DimensionError("mat: length " + std::to_string(v.size()) + " does not factor as " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  return CMatrix(rows, cols, std::vector<cplx>(v.entries().begin(), v.entries().end()));
}

EigenSystem eigh(const CMatrix& m) {
  if (!m.is_square()) throw std::invalid_argument("eigh: non-square " + shape(m) + " input");
  if (!m.is_hermitian(1e-12)) throw std::invalid_argument("eigh: input is not Hermitian");
  const std::size_t n = m.rows();
  EigenSystem out;
  if (n == 0) return out;

  Eigen::MatrixXcd em(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      em(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          0.5 * (m(i, j) + std::conj(m(j, i)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(em);
  if (solver.info() != Eigen::Success)
    throw NumericalError("eigh: eigensolver did not converge", 0.0);

  out.values.resize(n);
  out.vectors.resize(n);
  for (std::size_t r = 0; r < n; ++r) {
    const auto src = static_cast<Eigen::Index>(n - 1 - r);  // Eigen sorts ascending
    out.values[r] = solver.eigenvalues()(src);
    CVector v(n);
    for (std::size_t i = 0; i < n; ++i)
      v[i] = solver.eigenvectors()(static_cast<Eigen::Index>(i), src);
    fix_phase(v);
    out.vectors[r] = std::move(v);
  }
  return out;
}

SingularSystem svd(const CMatrix& m) {
  SingularSystem out;
  const std::size_t r = std::min(m.rows(), m.cols());
  if (r == 0) {
    out.u = CMatrix(m.rows(), 0);
    out.v = CMatrix(m.cols(), 0);
    return out;
  }
  Eigen::MatrixXcd em = detail::to_eigen(m);
  Eigen::BDCSVD<Eigen::MatrixXcd> solver(em, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.u = detail::from_eigen(solver.matrixU());
  out.v = detail::from_eigen(solver.matrixV());
  out.values.assign(solver.singularValues().data(), solver.singularValues().data() + r);
  return out;
}

CMatrix polar_factor(const CMatrix& m) {
  const auto s = svd(m);
  return s.u * s.v.adjoint();
}

CMatrix psd_sqrt(const CMatrix& m) {
  const auto es = eigh(m);
  CMatrix out(m.rows(), m.cols());
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    const double root = std::sqrt(std::max(0.0, es.values[k]));
    if (root == 0.0) continue;
    out += root * outer(es.vectors[k], es.vectors[k]);
  }
  return out;
}

CMatrix partial_trace(const CMatrix& m, std::size_t dim_a, std::size_t dim_b, Side keep) {
  if (!m.is_square() || m.rows() != dim_a * dim_b)
    throw DimensionError("partial_trace: " + shape(m) + " operator does not act on " +
                         std::to_string(dim_a) + "x" + std::to_string(dim_b));
  if (keep == Side::A) {
    CMatrix out(dim_a, dim_a);
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j) {
        cplx s = 0.0;
        for (std::size_t k = 0; k < dim_b; ++k) s += m(i * dim_b + k, j * dim_b + k);
        out(i, j) = s;
      }
    return out;
  }
  CMatrix out(dim_b, dim_b);
  for (std::size_t k = 0; k < dim_b; ++k)
    for (std::size_t l = 0; l < dim_b; ++l) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < dim_a; ++i) s += m(i * dim_b + k, i * dim_b + l);
      out(k, l) = s;
    }
  return out;
}

// ---------------------------------------------------------- DensityMatrix

DensityMatrix::DensityMatrix(CMatrix m, double tol) : m_(std::move(m)) {
  if (!m_.is_square()) throw DimensionError("density matrix must be square");
  if (!m_.is_hermitian(1e-10)) throw std::invalid_argument("density matrix is not Hermitian");
  const auto es = eigh(m_);
  if (!es.values.empty() && es.values.back() < -tol)
    throw std::invalid_argument("density matrix has negative eigenvalue " +
                                std::to_string(es.values.back()));
  if (std::abs(m_.trace() - 1.0) > tol)
    throw std::invalid_argument("density matrix trace differs from 1");
}

DensityMatrix DensityMatrix::from_pure(const CVector& psi) {
  return DensityMatrix(outer(psi, psi));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t dim) {
  if (dim == 0) throw std::invalid_argument("dimension must be positive");
  return DensityMatrix((1.0 / static_cast<double>(dim)) * CMatrix::identity(dim));
}

double rho_seminorm(const CMatrix& x, const DensityMatrix& rho) {
  if (!x.is_square() || x.rows() != rho.dim())
    throw DimensionError("rho_seminorm: operator " + shape(x) + " vs state of dimension " +
                         std::to_string(rho.dim()));
  const double value = (rho.matrix() * (x.adjoint() * x)).trace().real();
  return std::sqrt(std::max(0.0, value));
}

// ---------------------------------------------------------------- Schmidt

std::size_t SchmidtDecomposition::rank(double rel_tol) const {
  if (coefficients.empty() || coefficients.front() == 0.0) return 0;
  const double cutoff = rel_tol * coefficients.front();
  return static_cast<std::size_t>(
      std::count_if(coefficients.begin(), coefficients.end(),
                    [cutoff](double s) { return s > cutoff; }));
}

SchmidtDecomposition schmidt(const CVector& v, std::size_t dim_a, std::size_t dim_b) {
  if (v.size() != dim_a * dim_b)
    throw DimensionError("schmidt: vector of length " + std::to_string(v.size()) +
                         " is not on " + std::to_string(dim_a) + "x" + std::to_string(dim_b));
  const auto s = svd(mat(v, dim_a, dim_b));
  SchmidtDecomposition out;
  out.coefficients = s.values;
  for (std::size_t k = 0; k < s.values.size(); ++k) {
    CVector l(dim_a), r(dim_b);
    for (std::size_t i = 0; i < dim_a; ++i) l[i] = s.u(i, k);
    for (std::size_t j = 0; j < dim_b; ++j) r[j] = std::conj(s.v(j, k));
    out.left.push_back(std::move(l));
    out.right.push_back(std::move(r));
  }
  return out;
}

CVector regroup_to_ideal_junk(const CVector& v, std::size_t dim_a, std::size_t junk_a,
                              std::size_t dim_b, std::size_t junk_b) {
  if (v.size() != dim_a * junk_a * dim_b * junk_b) throw DimensionError("regroup: size mismatch");
  CVector out(v.size());
  for (std::size_t k = 0; k < dim_a; ++k)
    for (std::size_t j = 0; j < junk_a; ++j)
      for (std::size_t l = 0; l < dim_b; ++l)
        for (std::size_t jp = 0; jp < junk_b; ++jp) {
          const std::size_t parties = (k * junk_a + j) * (dim_b * junk_b) + (l * junk_b + jp);
          const std::size_t ideal = (k * dim_b + l) * (junk_a * junk_b) + (j * junk_b + jp);
          out[ideal] = v[parties];
        }
  return out;
}

CVector regroup_to_parties(const CVector& v, std::size_t dim_a, std::size_t junk_a,
                           std::size_t dim_b, std::size_t junk_b) {
  if (v.size() != dim_a * junk_a * dim_b * junk_b) throw DimensionError("regroup: size mismatch");
  CVector out(v.size());
  for (std::size_t k = 0; k < dim_a; ++k)
    for (std::size_t j = 0; j < junk_a; ++j)
      for (std::size_t l = 0; l < dim_b; ++l)
        for (std::size_t jp = 0; jp < junk_b; ++jp) {
          const std::size_t parties = (k * junk_a + j) * (dim_b * junk_b) + (l * junk_b + jp);
          const std::size_t ideal = (k * dim_b + l) * (junk_a * junk_b) + (j * junk_b + jp);
          out[parties] = v[ideal];
        }
  return out;
}

// ----------------------------------------------------------------- random

CMatrix random_ginibre(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, std::sqrt(0.5));
  CMatrix g(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      g(i, j) = cplx(re, im);
    }
  return g;
}

CMatrix haar_unitary(std::size_t n, Rng& rng) {
  const Eigen::MatrixXcd g = detail::to_eigen(random_ginibre(n, n, rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < q.cols(); ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(j) *= d / mag;
  }
  return detail::from_eigen(q);
}

CMatrix random_isometry(std::size_t rows, std::size_t cols, Rng& rng) {
  if (cols > rows) throw DimensionError("isometry needs rows >= cols");
  const CMatrix u = haar_unitary(rows, rng);
  CMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out(i, j) = u(i, j);
  return out;
}

CMatrix random_hermitian(std::size_t n, Rng& rng) {
  const CMatrix g = random_ginibre(n, n, rng);
  return 0.5 * (g + g.adjoint());
}

CVector random_unit_vector(std::size_t n, Rng& rng) {
  const CMatrix g = random_ginibre(n, 1, rng);
  CVector v(std::vector<cplx>(g.entries().begin(), g.entries().end()));
  return v.normalized();
}

CMatrix random_density(std::size_t n, std::size_t rank, Rng& rng) {
  const CMatrix w = random_ginibre(n, rank, rng);
  CMatrix rho = w * w.adjoint();
  return (1.0 / rho.trace().real()) * rho;
}

}  // namespace syncert
