#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "syncert/strategy.hpp"

namespace syncert {

/// Synchronous nonlocal game: m questions, n answers per party and a 0/1
/// predicate V(a,b|x,y) with V(a,b|x,x) = 0 whenever a != b.
class SynchronousGame {
 public:
  using Cell = std::array<std::size_t, 4>;  // x, y, a, b
  using Predicate = std::function<bool(std::size_t, std::size_t, std::size_t, std::size_t)>;

  /// Throws std::invalid_argument if the predicate is not synchronous.
  static SynchronousGame from_predicate(std::size_t questions, std::size_t answers,
                                        const Predicate& wins);
  /// Every cell wins except the listed ones.
  static SynchronousGame from_zero_cells(std::size_t questions, std::size_t answers,
                                         const std::vector<Cell>& zero_cells);

  std::size_t questions() const noexcept { return m_; }
  std::size_t answers() const noexcept { return n_; }
  bool wins(std::size_t x, std::size_t y, std::size_t a, std::size_t b) const {
    return table_[((x * m_ + y) * n_ + a) * n_ + b] != 0;
  }
  /// Cells with V = 0, in lexicographic (x, y, a, b) order.
  std::vector<Cell> zero_cells() const;

  friend bool operator==(const SynchronousGame&, const SynchronousGame&) = default;

 private:
  SynchronousGame(std::size_t m, std::size_t n, std::vector<std::uint8_t> table);

  std::size_t m_ = 0, n_ = 0;
  std::vector<std::uint8_t> table_;
};

/// Question index of the pair (x1, x2) in or_game(g1, g2).
inline std::size_t or_question(std::size_t x1, std::size_t x2, std::size_t questions2) {
  return x1 * questions2 + x2;
}

/// Players receive a question of each game and answer in A1 or in A2 (A2
/// shifted by |A1|); they win iff both answered in the same game and won it.
SynchronousGame or_game(const SynchronousGame& g1, const SynchronousGame& g2);

/// Lifts a perfect strategy for g1 to g1 v g2 by ignoring the g2 question and
/// never answering in A2. Throws std::invalid_argument if the loss exceeds 1e-10.
TensorStrategy lift_strategy(const TensorStrategy& s, const SynchronousGame& g1,
                             const SynchronousGame& g2);

struct OrIndependenceReport {
  double max_gap_a1 = 0.0;  // max ||E_{(x1,x2),a1} - E_{(x1,x2'),a1}||_{rho_A}
  double max_gap_a2 = 0.0;  // same with roles of the two games swapped
  double loss = 0.0;
  double projectivity_residual = 0.0;
  bool perfect = false;
  bool projective = false;

  double max_gap() const noexcept { return max_gap_a1 > max_gap_a2 ? max_gap_a1 : max_gap_a2; }
};

OrIndependenceReport check_or_independence(const TensorStrategy& s, const SynchronousGame& g1,
                                           const SynchronousGame& g2, double tol = 1e-10);

}  // namespace syncert
