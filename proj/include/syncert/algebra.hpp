#pragma once

// Finite-dimensional matrix *-algebras generated by labelled operator
// families: commutants, generated algebras, simultaneous block
// diagonalization and the relation/trace/state checks used for synchronous
// game algebras.

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "syncert/games.hpp"
#include "syncert/numerics.hpp"
#include "syncert/random.hpp"
#include "syncert/strategy.hpp"

namespace syncert {

/// Generator label e_{x,a}.
struct Letter {
  std::size_t x = 0;
  std::size_t a = 0;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};

/// Product of generators from left to right; the empty word is the identity.
using Word = std::vector<Letter>;

std::string to_string(const Word& w);

class OperatorFamily {
 public:
  explicit OperatorFamily(std::size_t dim) : dim_(dim) {}

  /// [x][a] indexed operators, labelled (x, a).
  static OperatorFamily from_indexed(const std::vector<std::vector<CMatrix>>& ops);
  static OperatorFamily from_pme(const PmeStrategy& s);
  /// Unstructured list, labelled (i, 0).
  static OperatorFamily from_list(const std::vector<CMatrix>& ops);

  /// Throws DimensionError on a wrong shape, std::invalid_argument on a duplicate label.
  void add(Letter label, CMatrix op);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ops_.size(); }
  bool empty() const noexcept { return ops_.empty(); }
  const std::vector<Letter>& labels() const noexcept { return labels_; }
  const std::vector<CMatrix>& operators() const noexcept { return ops_; }

  const CMatrix* find(Letter l) const noexcept;
  /// Throws std::out_of_range naming the letter when it is absent.
  const CMatrix& at(Letter l) const;

  /// Product of the word's operators; identity for the empty word.
  CMatrix evaluate(const Word& w) const;

 private:
  std::size_t dim_;
  std::vector<Letter> labels_;
  std::vector<CMatrix> ops_;
};

/// Frobenius-orthonormal basis of {B : AB = BA for all A in f}. The first
/// element is I/sqrt(d).
std::vector<CMatrix> commutant_basis(const OperatorFamily& f);

/// Trivial commutant.
bool is_irreducible(const OperatorFamily& f);

struct AlgebraSpan {
  std::vector<CMatrix> basis;  // Frobenius-orthonormal, starts with I/sqrt(d)
  std::size_t levels = 0;      // word length reached
  bool stabilized = false;     // a level added nothing (or the full matrix algebra was reached)

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// Span of all products of at most max_len generators (0 means d^2).
AlgebraSpan word_closure(const OperatorFamily& f, std::size_t max_len = 0);

/// Fixed points of X -> (1/m) sum_{x,a} E_{x,a} X E_{x,a}, where m is the
/// number of distinct question labels; orthonormal basis from a null-space solve.
std::vector<CMatrix> channel_fixed_points(const OperatorFamily& f);

/// Distance between the orthogonal projectors onto the spans of two
/// Frobenius-orthonormal matrix lists (operator norm on vec space).
double span_distance(const std::vector<CMatrix>& u, const std::vector<CMatrix>& v);

struct Block {
  std::size_t dim = 0;           // irrep dimension d_i
  std::size_t multiplicity = 0;  // s_i
};

/// unitary * A * unitary^* is block diagonal, equal to the direct sum over i of
/// images[i][k] (x) I_{s_i} for the k-th family operator. Rows of the unitary
/// for block i are laid out as offset_i + k*s_i + j.
struct BlockDecomposition {
  CMatrix unitary;
  std::vector<Block> blocks;
  std::vector<std::vector<CMatrix>> images;  // [block][operator index]
  double residual = 0.0;                     // max_k ||U A_k U^* - blockform||_F / ||A_k||_F

  std::size_t offset(std::size_t block) const;
};

/// Throws NumericalError if the blocks cannot be separated or the
/// reconstruction error exceeds 1e-8 relative.
BlockDecomposition block_diagonalize(const OperatorFamily& f, Rng& rng);
BlockDecomposition block_diagonalize(const OperatorFamily& f);

/// Unitary T with T A_k T^* = B_k for all k, if the two families are
/// equivalent (nullspace of the intertwiner system is nontrivial); empty
/// matrix otherwise.
CMatrix intertwiner(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b);

struct RelationReport {
  double idempotence = 0.0;    // max ||E^2 - E||_op
  double hermiticity = 0.0;    // max ||E - E^*||_op
  double completeness = 0.0;   // max_x ||sum_a E_{x,a} - I||_op
  double orthogonality = 0.0;  // max ||E_{x,a} E_{y,b}||_op over V(a,b|x,y) = 0
  bool passed = false;

  double worst() const noexcept;
};

/// Throws std::invalid_argument when a generator (x,a) of the game is missing.
RelationReport check_game_relations(const OperatorFamily& f, const SynchronousGame& g,
                                    double tol = 1e-10);

/// Tr(pi(w)) / d. Throws std::out_of_range on an unknown letter.
cplx trace_of_representation(const OperatorFamily& f, const Word& w);

struct Term {
  cplx coefficient;
  Word word;
};
/// Linear combination of words.
using AlgebraElement = std::vector<Term>;

struct GnsEntry {
  double trace_norm2 = 0.0;     // tau(a^* a)
  double gns_norm = 0.0;        // operator norm of left multiplication on the GNS space
  double operator_norm = 0.0;   // ||pi(a)||, for cross-checking gns_norm
  bool in_ideal = false;        // tau(a^* a) <= tol
  bool in_kernel = false;       // gns_norm <= sqrt(d * tol)
  bool mismatch = false;
};

struct GnsReport {
  double tol = 0.0;
  double kernel_tol = 0.0;  // sqrt(d * tol)
  std::vector<GnsEntry> entries;
  std::size_t mismatches = 0;
};

/// For each element a, compares membership in {a : tau(a^* a) = 0} with
/// membership in the kernel of the GNS representation of the normalized trace,
/// built on the algebra spanned by the family.
GnsReport check_gns_kernel(const OperatorFamily& f, const std::vector<AlgebraElement>& elements,
                           double tol = 1e-10);

struct SyncStateReport {
  double commutation_residual = 0.0;  // max ||[A, B]||_op over the two families
  double defect = 0.0;                // max_x sum_{a != b} <psi|E_{x,a} F_{x,b}|psi>
  double max_state_residual = 0.0;    // max ||(E_{x,a} - F_{x,a}) psi||
  double max_trace_residual = 0.0;    // max |<E_w E_w'> - <E_w' E_w>| over sampled pairs
  double max_trace_ratio = 0.0;       // max residual / (2 min(l, l') sqrt(tol))
  std::size_t sampled_pairs = 0;
  bool passed = false;
};

/// Checks E_{x,a} psi = F_{x,a} psi and the trace property of a -> <psi|a|psi>
/// on random word pairs (lengths 1..max_len). With a synchronicity defect
/// delta <= tol and projective families, the state residuals are bounded by
/// sqrt(tol) and a word pair of lengths l, l' by 2 min(l, l') sqrt(tol).
/// Throws std::invalid_argument if the families do not commute within tol.
SyncStateReport sync_state_checks(const OperatorFamily& alice, const OperatorFamily& bob,
                                  const CVector& state, double tol, Rng& rng,
                                  std::size_t samples = 200, std::size_t max_len = 3);

struct CommutingStrategy {
  OperatorFamily alice;
  OperatorFamily bob;
  CVector state;
};

/// (E (x) I, I (x) E^T, maximally entangled state) from a projective
/// representation of the game algebra. Throws std::invalid_argument if the
/// relations fail at tol.
CommutingStrategy trace_to_commuting_strategy(const OperatorFamily& f, const SynchronousGame& g,
                                              double tol = 1e-9);

/// p(a,b|x,y) = <psi|A_{x,a} B_{y,b}|psi> for families labelled by (x, a).
Correlation commuting_correlation(const CommutingStrategy& s, std::size_t questions,
                                  std::size_t answers);

}  // namespace syncert
