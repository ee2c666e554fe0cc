#pragma once

// Finite-dimensional strategies: POVM families for two parties plus a shared
// pure state (TensorStrategy), a density matrix (MixedStrategy), or the
// projective/maximally-entangled special case (PmeStrategy).

#include <cstddef>
#include <utility>
#include <vector>

#include "syncert/correlation.hpp"
#include "syncert/numerics.hpp"

namespace syncert {

class Povm {
 public:
  static constexpr double kTolerance = 1e-10;

  struct Check {
    double max_negativity = 0.0;       // -(smallest eigenvalue) over effects, clamped at 0
    double max_hermiticity = 0.0;      // max ||E - E^*||_F
    double completeness_residual = 0.0;  // ||sum_a E_a - I||_op
    bool ok = true;
  };

  /// Measures how far a list of effects is from a POVM.
  static Check check(const std::vector<CMatrix>& effects, double tol = kTolerance);

  /// Throws std::invalid_argument unless check() passes.
  explicit Povm(std::vector<CMatrix> effects, double tol = kTolerance);

  std::size_t outcomes() const noexcept { return effects_.size(); }
  std::size_t dim() const noexcept { return effects_.empty() ? 0 : effects_.front().rows(); }
  const CMatrix& operator[](std::size_t a) const { return effects_[a]; }
  const std::vector<CMatrix>& effects() const noexcept { return effects_; }

  /// max_a ||E_a^2 - E_a||_op.
  double projectivity_residual() const;

 private:
  std::vector<CMatrix> effects_;
};

class TensorStrategy {
 public:
  /// All Alice POVMs must share dimension and outcome count; same for Bob.
  /// The state must be a unit vector on dimA*dimB (within 1e-10).
  TensorStrategy(std::vector<Povm> alice, std::vector<Povm> bob, CVector state);

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  std::size_t questions_a() const noexcept { return alice_.size(); }
  std::size_t questions_b() const noexcept { return bob_.size(); }
  std::size_t answers_a() const noexcept { return alice_.front().outcomes(); }
  std::size_t answers_b() const noexcept { return bob_.front().outcomes(); }

  const Povm& alice(std::size_t x) const { return alice_.at(x); }
  const Povm& bob(std::size_t y) const { return bob_.at(y); }
  const std::vector<Povm>& alice() const noexcept { return alice_; }
  const std::vector<Povm>& bob() const noexcept { return bob_; }
  const CVector& state() const noexcept { return state_; }

 private:
  std::vector<Povm> alice_, bob_;
  CVector state_;
  std::size_t dim_a_ = 0, dim_b_ = 0;
};

class MixedStrategy {
 public:
  MixedStrategy(std::vector<Povm> alice, std::vector<Povm> bob, DensityMatrix rho);

  std::size_t dim_a() const noexcept { return dim_a_; }
  std::size_t dim_b() const noexcept { return dim_b_; }
  const std::vector<Povm>& alice() const noexcept { return alice_; }
  const std::vector<Povm>& bob() const noexcept { return bob_; }
  const DensityMatrix& rho() const noexcept { return rho_; }

 private:
  std::vector<Povm> alice_, bob_;
  DensityMatrix rho_;
  std::size_t dim_a_ = 0, dim_b_ = 0;
};

/// Projections indexed [x][a], all d x d, each question a projective
/// measurement. Bob's operators are the transposes and are never stored.
class PmeStrategy {
 public:
  static constexpr double kTolerance = 1e-10;

  explicit PmeStrategy(std::vector<std::vector<CMatrix>> projections, double tol = kTolerance);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t questions() const noexcept { return proj_.size(); }
  std::size_t answers() const noexcept { return proj_.front().size(); }
  const CMatrix& projection(std::size_t x, std::size_t a) const { return proj_.at(x).at(a); }
  const std::vector<std::vector<CMatrix>>& projections() const noexcept { return proj_; }

 private:
  std::vector<std::vector<CMatrix>> proj_;
  std::size_t dim_ = 0;
};

/// vec(I_d / sqrt(d)). Throws std::invalid_argument for d = 0.
CVector maximally_entangled(std::size_t d);

/// Alice keeps the projections, Bob gets their transposes, state is maximally entangled.
TensorStrategy pme_as_tensor(const PmeStrategy& s);

/// p(a,b|x,y) = <psi| E_{x,a} (x) F_{y,b} |psi>.
Correlation correlation_of_tensor(const TensorStrategy& s);
/// p(a,b|x,y) = Tr(rho (E_{x,a} (x) F_{y,b})).
Correlation correlation_of_mixed(const MixedStrategy& s);
/// p(a,b|x,y) = Tr(E_{x,a} E_{y,b}) / d.
Correlation correlation_of_pme(const PmeStrategy& s);

struct ReducedStates {
  DensityMatrix rho_a;
  DensityMatrix rho_b;
};
ReducedStates reduced_states(const TensorStrategy& s);

/// Compresses both parties onto the Schmidt support of the state (rank
/// threshold 1e-10 relative), so that both reduced states become invertible.
/// The new state is diagonal in the Schmidt basis.
TensorStrategy restrict_to_support(const TensorStrategy& s);

/// Entrywise transpose of every operator of an [x][a] family.
std::vector<std::vector<CMatrix>> transposed_family(const std::vector<std::vector<CMatrix>>& f);

}  // namespace syncert
