#include "syncert/games.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace syncert {

SynchronousGame::SynchronousGame(std::size_t m, std::size_t n, std::vector<std::uint8_t> table)
    : m_(m), n_(n), table_(std::move(table)) {
  if (m_ == 0 || n_ == 0) throw std::invalid_argument("a game needs questions and answers");
  for (std::size_t x = 0; x < m_; ++x)
    for (std::size_t a = 0; a < n_; ++a)
      for (std::size_t b = 0; b < n_; ++b)
        if (a != b && wins(x, x, a, b))
          throw std::invalid_argument("predicate is not synchronous: V(" + std::to_string(a) +
                                      "," + std::to_string(b) + "|" + std::to_string(x) + "," +
                                      std::to_string(x) + ") = 1");
}

SynchronousGame SynchronousGame::from_predicate(std::size_t questions, std::size_t answers,
                                                const Predicate& wins) {
  std::vector<std::uint8_t> table(questions * questions * answers * answers, 0);
  std::size_t i = 0;
  for (std::size_t x = 0; x < questions; ++x)
    for (std::size_t y = 0; y < questions; ++y)
      for (std::size_t a = 0; a < answers; ++a)
        for (std::size_t b = 0; b < answers; ++b) table[i++] = wins(x, y, a, b) ? 1 : 0;
  return SynchronousGame(questions, answers, std::move(table));
}

SynchronousGame SynchronousGame::from_zero_cells(std::size_t questions, std::size_t answers,
                                                 const std::vector<Cell>& zero_cells) {
  std::vector<std::uint8_t> table(questions * questions * answers * answers, 1);
  for (const auto& [x, y, a, b] : zero_cells) {
    if (x >= questions || y >= questions || a >= answers || b >= answers)
      throw DimensionError("zero cell [" + std::to_string(x) + "," + std::to_string(y) + "," +
                           std::to_string(a) + "," + std::to_string(b) + "] out of range");
    table[((x * questions + y) * answers + a) * answers + b] = 0;
  }
  return SynchronousGame(questions, answers, std::move(table));
}

std::vector<SynchronousGame::Cell> SynchronousGame::zero_cells() const {
  std::vector<Cell> out;
  for (std::size_t x = 0; x < m_; ++x)
    for (std::size_t y = 0; y < m_; ++y)
      for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = 0; b < n_; ++b)
          if (!wins(x, y, a, b)) out.push_back({x, y, a, b});
  return out;
}

SynchronousGame or_game(const SynchronousGame& g1, const SynchronousGame& g2) {
  const std::size_t m2 = g2.questions();
  const std::size_t n1 = g1.answers();
  return SynchronousGame::from_predicate(
      g1.questions() * m2, n1 + g2.answers(),
      [&](std::size_t qx, std::size_t qy, std::size_t a, std::size_t b) {
        const std::size_t x1 = qx / m2, x2 = qx % m2;
        const std::size_t y1 = qy / m2, y2 = qy % m2;
        if (a < n1 && b < n1) return g1.wins(x1, y1, a, b);
        if (a >= n1 && b >= n1) return g2.wins(x2, y2, a - n1, b - n1);
        return false;
      });
}

TensorStrategy lift_strategy(const TensorStrategy& s, const SynchronousGame& g1,
                             const SynchronousGame& g2) {
  const double loss = game_loss(correlation_of_tensor(s), g1);
  if (loss > 1e-10)
    throw std::invalid_argument("lift_strategy: input is not perfect for the first game (loss " +
                                std::to_string(loss) + ")");

  auto lift = [&](const std::vector<Povm>& family, std::size_t dim) {
    std::vector<Povm> out;
    for (std::size_t x1 = 0; x1 < g1.questions(); ++x1)
      for (std::size_t x2 = 0; x2 < g2.questions(); ++x2) {
        std::vector<CMatrix> effects = family[x1].effects();
        for (std::size_t a2 = 0; a2 < g2.answers(); ++a2) effects.emplace_back(dim, dim);
        out.emplace_back(std::move(effects));
      }
    return out;
  };
  return TensorStrategy(lift(s.alice(), s.dim_a()), lift(s.bob(), s.dim_b()), s.state());
}

OrIndependenceReport check_or_independence(const TensorStrategy& s, const SynchronousGame& g1,
                                           const SynchronousGame& g2, double tol) {
  const SynchronousGame g = or_game(g1, g2);
  if (s.questions_a() != g.questions() || s.answers_a() != g.answers())
    throw DimensionError("strategy shape does not match the combined game");

  OrIndependenceReport r;
  r.loss = game_loss(correlation_of_tensor(s), g);
  for (const auto& povm : s.alice())
    r.projectivity_residual = std::max(r.projectivity_residual, povm.projectivity_residual());
  r.perfect = r.loss <= tol;
  r.projective = r.projectivity_residual <= tol;

  const DensityMatrix rho_a = reduced_states(s).rho_a;
  const std::size_t m1 = g1.questions(), m2 = g2.questions(), n1 = g1.answers();
  for (std::size_t x1 = 0; x1 < m1; ++x1)
    for (std::size_t a = 0; a < n1; ++a)
      for (std::size_t x2 = 0; x2 < m2; ++x2)
        for (std::size_t x2p = x2 + 1; x2p < m2; ++x2p) {
          const CMatrix diff = s.alice(or_question(x1, x2, m2))[a] -
                               s.alice(or_question(x1, x2p, m2))[a];
          r.max_gap_a1 = std::max(r.max_gap_a1, rho_seminorm(diff, rho_a));
        }
  for (std::size_t x2 = 0; x2 < m2; ++x2)
    for (std::size_t a = n1; a < g.answers(); ++a)
      for (std::size_t x1 = 0; x1 < m1; ++x1)
        for (std::size_t x1p = x1 + 1; x1p < m1; ++x1p) {
          const CMatrix diff = s.alice(or_question(x1, x2, m2))[a] -
                               s.alice(or_question(x1p, x2, m2))[a];
          r.max_gap_a2 = std::max(r.max_gap_a2, rho_seminorm(diff, rho_a));
        }
  return r;
}

}  // namespace syncert
