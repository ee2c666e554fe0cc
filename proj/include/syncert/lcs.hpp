#pragma once

// Linear constraint systems over Z_d: solution-group presentations, the
// synchronous constraint/assignment game, operator-solution checks and the
// joint-spectral-projection strategy built from an operator solution.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "syncert/games.hpp"
#include "syncert/numerics.hpp"
#include "syncert/strategy.hpp"

namespace syncert {

struct LcsConstraint {
  std::vector<std::size_t> support;
  std::vector<std::uint32_t> coefficients;  // same length as support, nonzero mod d
  std::uint32_t rhs = 0;
};

class LcsSystem {
 public:
  /// Throws std::invalid_argument on d < 2, repeated or out-of-range support
  /// indices, a zero coefficient, or a coefficient list of the wrong length.
  /// Coefficients and rhs are reduced mod d.
  LcsSystem(std::uint32_t modulus, std::size_t variables, std::vector<LcsConstraint> constraints);

  std::uint32_t modulus() const noexcept { return d_; }
  std::size_t variables() const noexcept { return n_; }
  const std::vector<LcsConstraint>& constraints() const noexcept { return constraints_; }
  /// Largest support size, at least 1.
  std::size_t max_support() const noexcept;

  /// exp(2 pi i / d).
  cplx omega() const;

 private:
  std::uint32_t d_;
  std::size_t n_;
  std::vector<LcsConstraint> constraints_;
};

enum class RelationKind { GeneratorOrder, JOrder, JCentral, SupportCommutation, ConstraintProduct };

std::string to_string(RelationKind k);

struct GroupLetter {
  std::size_t generator = 0;  // variables() denotes J
  std::uint32_t exponent = 1;
};

/// word = J^j_power.
struct GroupRelation {
  RelationKind kind = RelationKind::GeneratorOrder;
  std::vector<GroupLetter> word;
  std::uint32_t j_power = 0;
};

struct SolutionGroupPresentation {
  std::uint32_t modulus = 2;
  std::size_t generators = 1;  // variables + 1
  std::size_t j_index = 0;     // == generators - 1
  std::vector<GroupRelation> relations;
};

SolutionGroupPresentation solution_group(const LcsSystem& s);

/// Assignment tuple of an answer, most significant digit first, length
/// max_support(). nullopt when a padded position is nonzero or the
/// constraint is violated.
std::optional<std::vector<std::uint32_t>> decode_answer(const LcsSystem& s, std::size_t question,
                                                        std::size_t answer);
/// Inverse of decode_answer for a satisfying assignment of the constraint's support.
std::size_t encode_answer(const LcsSystem& s, const std::vector<std::uint32_t>& assignment);

/// Questions are constraints, answers are padded assignments in Z_d^k.
SynchronousGame lcs_to_sync_game(const LcsSystem& s);

struct OperatorSolutionReport {
  std::vector<double> relation_residuals;  // ||pi(w) - pi(J)^k||_op, one per relation
  double max_relation_residual = 0.0;
  double j_residual = 0.0;          // ||pi(J) - omega I||_op
  double unitarity_residual = 0.0;  // max ||U^* U - I||_op
  bool passed = false;
};

/// rep[i] represents generator i; rep.back() represents J. Throws
/// std::invalid_argument when a generator is missing or dimensions differ.
OperatorSolutionReport verify_operator_solution(const SolutionGroupPresentation& p,
                                                const std::vector<CMatrix>& rep, double tol);

/// Joint spectral projections of the unitaries on each constraint's support,
/// indexed like lcs_to_sync_game. Throws std::invalid_argument if the
/// representation fails verification at 1e-9 or a support does not commute.
PmeStrategy representation_to_strategy(const LcsSystem& s, const std::vector<CMatrix>& rep);

}  // namespace syncert
