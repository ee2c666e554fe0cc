#pragma once

// Quantitative self-testing certificates for PME strategies: the
// synchronicity operator and its spectral gap, robustness constants,
// junk-state extraction, local dilations (exact and heuristic), the moment
// closeness bound and three auxiliary inequalities as checkable utilities.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "syncert/algebra.hpp"
#include "syncert/numerics.hpp"
#include "syncert/random.hpp"
#include "syncert/strategy.hpp"

namespace syncert {

/// sum_{x,a} E_{x,a} (x) E_{x,a}^T, acting on C^d (x) C^d.
CMatrix sync_operator(const PmeStrategy& s);

struct SpectralCertificate {
  static constexpr double kTolerance = 1e-8;

  std::size_t m = 0;    // questions
  std::size_t dim = 0;  // d
  double top_eigenvalue = 0.0;
  double lambda2 = 0.0;  // largest eigenvalue outside the top cluster; 0 when d = 1
  std::size_t top_multiplicity = 0;
  double overlap_with_me_state = 0.0;  // |<psi~|v_top>|^2
  bool irreducible = false;
  bool degenerate = false;  // d = 1, the operator is the scalar m
  bool certified = false;   // irreducible, top = m, multiplicity 1, overlap >= 1 - 1e-8

  double gap() const noexcept { return static_cast<double>(m) - lambda2; }
};

SpectralCertificate spectral_certificate(const PmeStrategy& s);

struct RobustnessConstants {
  std::size_t m = 0;
  std::size_t n = 0;
  double gap = 0.0;
  double eps = 0.0;
  double eps_prime = 0.0;
  double beta = 0.0;
  double delta_constructive = 0.0;  // equals eps_prime
  bool feasible = false;            // eps_prime > 0 was found
  bool capped = false;              // eps_prime is limited by the gap constraint, not by eps
  std::string delta_prime = "non-constructive";

  /// 2 eps' + beta + sqrt(5 eps' + 2 beta).
  double dilation_error() const noexcept;
};

/// sqrt(2(2mn+1) eps' / gap).
double robustness_beta(std::size_t m, std::size_t n, double gap, double eps_prime);
double robustness_dilation_error(double eps_prime, double beta);

/// Largest eps' < gap/(2mn+1) with dilation_error <= eps, by fixed-length
/// bisection. Throws std::invalid_argument when gap <= 0 or eps <= 0.
RobustnessConstants robustness_constants(std::size_t m, double gap, std::size_t n, double eps);
RobustnessConstants robustness_constants(const SpectralCertificate& cert, std::size_t n,
                                         double eps);

struct JunkState {
  double alpha = 0.0;  // ||Q psi'||
  CVector aux;         // unit vector on C^{sA sB}
  double residual = 0.0;  // ||Q psi' - alpha psi~ (x) aux||
};

/// mapped_state lives on (C^d (x) C^d) (x) (C^sA (x) C^sB). Q projects onto
/// the top eigenspace of M~ (x) I. Throws std::invalid_argument when alpha <= 1e-12
/// or the length is not a multiple of d^2.
JunkState extract_junk(const PmeStrategy& ideal, const CVector& mapped_state);

struct Dilation {
  CMatrix iso_a;  // (d sA) x rA
  CMatrix iso_b;  // (d sB) x rB
  CVector aux;    // sA sB
  std::size_t junk_a = 0;
  std::size_t junk_b = 0;

  /// max(||V_A^* V_A - I||_F, ||V_B^* V_B - I||_F).
  double isometry_defect() const;
};

struct DilationResiduals {
  double state_residual = 0.0;
  double max_measurement_residual = 0.0;

  double worst() const noexcept {
    return state_residual > max_measurement_residual ? state_residual : max_measurement_residual;
  }
};

/// Residuals of (V_A (x) V_B) psi against psi~ (x) aux and of the measured
/// vectors against (E~ (x) F~) psi~ (x) aux, after regrouping
/// (d sA)(d sB) -> (d d)(sA sB).
DilationResiduals verify_dilation(const TensorStrategy& s, const PmeStrategy& ideal,
                                  const Dilation& dil);

/// Exact dilation of a full-rank strategy that induces the ideal correlation:
/// each party's effect algebra is block diagonalized and its unique
/// irreducible block is aligned with the ideal projections. Throws
/// std::invalid_argument when some block is not equivalent to the ideal one.
Dilation find_dilation_exact(const TensorStrategy& s, const PmeStrategy& ideal);
Dilation find_dilation_exact(const TensorStrategy& s, const PmeStrategy& ideal, Rng& rng);

struct NumericDilationOptions {
  std::size_t iters = 200;
  std::uint64_t seed = kDefaultSeed;
  std::size_t restarts = 4;
  std::optional<std::size_t> junk_a;  // default: ceil(rA / d)
  std::optional<std::size_t> junk_b;
};

struct NumericDilation {
  Dilation dilation;
  DilationResiduals residuals;
  double objective = 0.0;  // sum ||E - V^*(E~ (x) I)V||_{rho_A}^2 + the same for Bob
  std::size_t iterations = 0;
  bool co_isometry = false;  // d * s < r, V is only a co-isometry
};

/// Best-effort dilation for strategies that need not induce the ideal
/// correlation exactly: shifted fixed-point (Procrustes) updates of V_A and
/// V_B with a few seeded restarts, then junk extraction.
NumericDilation find_dilation_numeric(const TensorStrategy& s, const PmeStrategy& ideal,
                                      const NumericDilationOptions& opts = {});

struct MomentGap {
  double gap = 0.0;
  double bound = 0.0;
  double eps = 0.0;
  bool holds = false;  // gap <= bound + 1e-9
};

/// |rho~(alpha (x) beta) - rho(alpha (x) beta)| against
/// ((n+5)(l(alpha)+l(beta))+2) eps, with eps = verify_dilation(...).worst().
MomentGap moment_gap(const TensorStrategy& s, const PmeStrategy& ideal, const Dilation& dil,
                     const Word& word_a, const Word& word_b);
/// Same with an explicit eps.
MomentGap moment_gap(const TensorStrategy& s, const PmeStrategy& ideal, const Word& word_a,
                     const Word& word_b, double eps);

struct OverlapBound {
  double lower_bound = 0.0;  // 1 - eps / (lambda1 - lambda2)
  double actual = 0.0;       // ||Q1 xi||^2
  bool precondition = false; // <xi|A|xi> >= lambda1 - eps
  bool holds = false;        // actual >= lower_bound - 1e-10
};

/// Throws std::invalid_argument when A has a single distinct eigenvalue.
OverlapBound eigengap_overlap_bound(const CMatrix& a, const CVector& xi, double eps);

struct TensorPerturbation {
  double expectation_gap = 0.0;
  double expectation_bound = 0.0;
  double vector_gap = 0.0;
  double vector_bound = 0.0;
  bool holds = false;
};

TensorPerturbation tensor_perturbation_bound(const CMatrix& x1, const CMatrix& x2,
                                             const CMatrix& y1, const CMatrix& y2,
                                             const CVector& psi);

struct ProjectionCloseness {
  double distance = 0.0;  // ||xi - eta||
  double bound = 0.0;     // eps2 + sqrt(eps1 + (||xi|| + ||eta||) eps2)
  bool precondition = false;
  bool holds = false;
  std::string diagnostic;
};

ProjectionCloseness projection_closeness_bound(const CVector& xi, const CVector& eta,
                                               const CMatrix& p, double eps1, double eps2);

/// E_eta = (1 - eta) E + eta I / n on both sides, same state.
TensorStrategy depolarize(const TensorStrategy& s, double eta);

}  // namespace syncert
