#include "syncert/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace syncert {

namespace {

void require_uniform(const std::vector<Povm>& family, const char* who, std::size_t& dim) {
  if (family.empty()) throw std::invalid_argument(std::string(who) + " has no questions");
  dim = family.front().dim();
  const std::size_t outcomes = family.front().outcomes();
  for (std::size_t x = 0; x < family.size(); ++x) {
    if (family[x].dim() != dim)
      throw DimensionError(std::string(who) + " question " + std::to_string(x) +
                           " acts on dimension " + std::to_string(family[x].dim()) +
                           ", expected " + std::to_string(dim));
    if (family[x].outcomes() != outcomes)
      throw DimensionError(std::string(who) + " question " + std::to_string(x) + " has " +
                           std::to_string(family[x].outcomes()) + " outcomes, expected " +
                           std::to_string(outcomes));
  }
}

CMatrix compress(const CMatrix& e, const CMatrix& basis) {
  return basis.adjoint() * e * basis;
}

}  // namespace

// ------------------------------------------------------------------- Povm

Povm::Check Povm::check(const std::vector<CMatrix>& effects, double tol) {
  Check c;
  if (effects.empty()) {
    c.ok = false;
    c.completeness_residual = 1.0;
    return c;
  }
  const std::size_t d = effects.front().rows();
  CMatrix sum(d, d);
  for (const auto& e : effects) {
    if (!e.is_square() || e.rows() != d)
      throw DimensionError("POVM effects must all be " + std::to_string(d) + "x" +
                           std::to_string(d));
    const double herm = (e - e.adjoint()).frobenius_norm();
    c.max_hermiticity = std::max(c.max_hermiticity, herm);
    const CMatrix h = 0.5 * (e + e.adjoint());
    const auto es = eigh(h);
    if (!es.values.empty()) c.max_negativity = std::max(c.max_negativity, -es.values.back());
    sum += e;
  }
  c.completeness_residual = operator_norm(sum - CMatrix::identity(d));
  c.ok = c.max_hermiticity <= tol && c.max_negativity <= tol && c.completeness_residual <= tol;
  return c;
}

Povm::Povm(std::vector<CMatrix> effects, double tol) : effects_(std::move(effects)) {
  const Check c = check(effects_, tol);
  if (!c.ok)
    throw std::invalid_argument(
        "not a POVM: completeness residual " + std::to_string(c.completeness_residual) +
        ", negativity " + std::to_string(c.max_negativity) + ", hermiticity defect " +
        std::to_string(c.max_hermiticity));
}

double Povm::projectivity_residual() const {
  double r = 0.0;
  for (const auto& e : effects_) r = std::max(r, operator_norm(e * e - e));
  return r;
}

// --------------------------------------------------------------- strategies

TensorStrategy::TensorStrategy(std::vector<Povm> alice, std::vector<Povm> bob, CVector state)
    : alice_(std::move(alice)), bob_(std::move(bob)), state_(std::move(state)) {
  require_uniform(alice_, "Alice", dim_a_);
  require_uniform(bob_, "Bob", dim_b_);
  if (state_.size() != dim_a_ * dim_b_)
    throw DimensionError("state has length " + std::to_string(state_.size()) + ", expected " +
                         std::to_string(dim_a_ * dim_b_));
  if (!state_.is_unit(1e-10))
    throw std::invalid_argument("state is not a unit vector (norm " +
                                std::to_string(state_.norm()) + ")");
}

MixedStrategy::MixedStrategy(std::vector<Povm> alice, std::vector<Povm> bob, DensityMatrix rho)
    : alice_(std::move(alice)), bob_(std::move(bob)), rho_(std::move(rho)) {
  require_uniform(alice_, "Alice", dim_a_);
  require_uniform(bob_, "Bob", dim_b_);
  if (rho_.dim() != dim_a_ * dim_b_)
    throw DimensionError("density matrix has dimension " + std::to_string(rho_.dim()) +
                         ", expected " + std::to_string(dim_a_ * dim_b_));
}

PmeStrategy::PmeStrategy(std::vector<std::vector<CMatrix>> projections, double tol)
    : proj_(std::move(projections)) {
  if (proj_.empty() || proj_.front().empty())
    throw std::invalid_argument("PME strategy needs at least one question and one answer");
  dim_ = proj_.front().front().rows();
  const std::size_t n = proj_.front().size();
  const CMatrix id = CMatrix::identity(dim_);
  for (std::size_t x = 0; x < proj_.size(); ++x) {
    if (proj_[x].size() != n)
      throw DimensionError("question " + std::to_string(x) + " has " +
                           std::to_string(proj_[x].size()) + " answers, expected " +
                           std::to_string(n));
    CMatrix sum(dim_, dim_);
    for (std::size_t a = 0; a < n; ++a) {
      const CMatrix& p = proj_[x][a];
      if (!p.is_square() || p.rows() != dim_)
        throw DimensionError("projection (" + std::to_string(x) + "," + std::to_string(a) +
                             ") is not " + std::to_string(dim_) + "x" + std::to_string(dim_));
      const double idem = operator_norm(p * p - p);
      const double herm = operator_norm(p - p.adjoint());
      if (idem > tol || herm > tol)
        throw std::invalid_argument("operator (" + std::to_string(x) + "," + std::to_string(a) +
                                    ") is not an orthogonal projection (idempotence " +
                                    std::to_string(idem) + ", hermiticity " +
                                    std::to_string(herm) + ")");
      sum += p;
    }
    const double completeness = operator_norm(sum - id);
    if (completeness > tol)
      throw std::invalid_argument("projections of question " + std::to_string(x) +
                                  " do not sum to the identity (residual " +
                                  std::to_string(completeness) + ")");
  }
}

CVector maximally_entangled(std::size_t d) {
  if (d == 0) throw std::invalid_argument("maximally_entangled: dimension must be positive");
  return vec((1.0 / std::sqrt(static_cast<double>(d))) * CMatrix::identity(d));
}

std::vector<std::vector<CMatrix>> transposed_family(const std::vector<std::vector<CMatrix>>& f) {
  std::vector<std::vector<CMatrix>> out(f.size());
  for (std::size_t x = 0; x < f.size(); ++x)
    for (const auto& e : f[x]) out[x].push_back(e.transpose());
  return out;
}

TensorStrategy pme_as_tensor(const PmeStrategy& s) {
  std::vector<Povm> alice, bob;
  for (const auto& q : s.projections()) alice.emplace_back(q);
  for (auto& q : transposed_family(s.projections())) bob.emplace_back(std::move(q));
  return TensorStrategy(std::move(alice), std::move(bob), maximally_entangled(s.dim()));
}

// <psi|E (x) F|psi> = Tr(Psi^* E Psi F^T) with Psi = mat(psi), so with
// G = Psi^* E Psi the value is sum_{k,l} G(k,l) F(k,l).
Correlation correlation_of_tensor(const TensorStrategy& s) {
  const CMatrix psi = mat(s.state(), s.dim_a(), s.dim_b());
  const CMatrix psi_adj = psi.adjoint();
  Correlation p(s.questions_a(), s.questions_b(), s.answers_a(), s.answers_b());
  for (std::size_t x = 0; x < s.questions_a(); ++x)
    for (std::size_t a = 0; a < s.answers_a(); ++a) {
      const CMatrix g = psi_adj * s.alice(x)[a] * psi;
      for (std::size_t y = 0; y < s.questions_b(); ++y)
        for (std::size_t b = 0; b < s.answers_b(); ++b) {
          const auto fe = s.bob(y)[b].entries();
          const auto ge = g.entries();
          cplx v = 0.0;
          for (std::size_t i = 0; i < fe.size(); ++i) v += ge[i] * fe[i];
          p(x, y, a, b) = v.real();
        }
    }
  return p;
}

Correlation correlation_of_mixed(const MixedStrategy& s) {
  const std::size_t nx = s.alice().size(), ny = s.bob().size();
  const std::size_t na = s.alice().front().outcomes(), nb = s.bob().front().outcomes();
  Correlation p(nx, ny, na, nb);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t a = 0; a < na; ++a)
      for (std::size_t y = 0; y < ny; ++y)
        for (std::size_t b = 0; b < nb; ++b) {
          const CMatrix op = tensor(s.alice()[x][a], s.bob()[y][b]);
          p(x, y, a, b) = (s.rho().matrix() * op).trace().real();
        }
  return p;
}

Correlation correlation_of_pme(const PmeStrategy& s) {
  const std::size_t m = s.questions(), n = s.answers();
  const double inv_d = 1.0 / static_cast<double>(s.dim());
  Correlation p(m, m, n, n);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t y = 0; y < m; ++y)
        for (std::size_t b = 0; b < n; ++b) {
          // Tr(P Q) for Hermitian P, Q is sum_ij P(i,j) conj(Q(i,j)).
          const auto pe = s.projection(x, a).entries();
          const auto qe = s.projection(y, b).entries();
          double t = 0.0;
          for (std::size_t i = 0; i < pe.size(); ++i) t += (pe[i] * std::conj(qe[i])).real();
          p(x, y, a, b) = t * inv_d;
        }
  return p;
}

ReducedStates reduced_states(const TensorStrategy& s) {
  const CMatrix psi = mat(s.state(), s.dim_a(), s.dim_b());
  // rho_A = Psi Psi^*, rho_B = (Psi^* Psi)^T.
  CMatrix ra = psi * psi.adjoint();
  CMatrix rb = (psi.adjoint() * psi).transpose();
  return {DensityMatrix(0.5 * (ra + ra.adjoint())), DensityMatrix(0.5 * (rb + rb.adjoint()))};
}

TensorStrategy restrict_to_support(const TensorStrategy& s) {
  const auto sd = schmidt(s.state(), s.dim_a(), s.dim_b());
  const std::size_t r = sd.rank(1e-10);
  CMatrix basis_a(s.dim_a(), r), basis_b(s.dim_b(), r);
  CVector state(r * r);
  double norm2 = 0.0;
  for (std::size_t k = 0; k < r; ++k) {
    for (std::size_t i = 0; i < s.dim_a(); ++i) basis_a(i, k) = sd.left[k][i];
    for (std::size_t j = 0; j < s.dim_b(); ++j) basis_b(j, k) = sd.right[k][j];
    state[k * r + k] = sd.coefficients[k];
    norm2 += sd.coefficients[k] * sd.coefficients[k];
  }
  state *= 1.0 / std::sqrt(norm2);

  auto squeeze = [](const std::vector<Povm>& family, const CMatrix& basis) {
    std::vector<Povm> out;
    for (const auto& povm : family) {
      std::vector<CMatrix> effects;
      for (const auto& e : povm.effects()) {
        CMatrix c = compress(e, basis);
        effects.push_back(0.5 * (c + c.adjoint()));
      }
      out.emplace_back(std::move(effects), 1e-9);
    }
    return out;
  };
  return TensorStrategy(squeeze(s.alice(), basis_a), squeeze(s.bob(), basis_b), std::move(state));
}

}  // namespace syncert
