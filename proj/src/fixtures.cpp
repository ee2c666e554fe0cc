#include "syncert/fixtures.hpp"

#include <cmath>
#include <stdexcept>

namespace syncert::fixtures {

namespace {

const CMatrix kI{{1, 0}, {0, 1}};
const CMatrix kX{{0, 1}, {1, 0}};
const CMatrix kY{{0, cplx(0, -1)}, {cplx(0, 1), 0}};
const CMatrix kZ{{1, 0}, {0, -1}};

}  // namespace

PmeStrategy trivial_pme() { return PmeStrategy({{CMatrix{{1}}}}); }

PmeStrategy computational_qubit() {
  return PmeStrategy({{CMatrix{{1, 0}, {0, 0}}, CMatrix{{0, 0}, {0, 1}}}});
}

PmeStrategy two_mub_qubit() {
  const CMatrix plus{{0.5, 0.5}, {0.5, 0.5}};
  const CMatrix minus{{0.5, -0.5}, {-0.5, 0.5}};
  return PmeStrategy({{CMatrix{{1, 0}, {0, 0}}, CMatrix{{0, 0}, {0, 1}}}, {plus, minus}});
}

LcsSystem magic_square_system() {
  std::vector<LcsConstraint> cs;
  for (std::size_t r = 0; r < 3; ++r) cs.push_back({{3 * r, 3 * r + 1, 3 * r + 2}, {1, 1, 1}, 0});
  for (std::size_t c = 0; c < 3; ++c) cs.push_back({{c, c + 3, c + 6}, {1, 1, 1}, 1});
  return LcsSystem(2, 9, std::move(cs));
}

std::vector<CMatrix> magic_square_pauli() {
  return {tensor(kX, kI),         tensor(kI, kX),         tensor(kX, kX),
          tensor(kI, kZ),         tensor(kZ, kI),         tensor(kZ, kZ),
          -1.0 * tensor(kX, kZ), -1.0 * tensor(kZ, kX), tensor(kY, kY),
          -1.0 * CMatrix::identity(4)};
}

PmeStrategy magic_square_pme() {
  return representation_to_strategy(magic_square_system(), magic_square_pauli());
}

SynchronousGame edge_coloring_game() {
  return SynchronousGame::from_predicate(
      2, 2, [](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
        return x == y ? a == b : a != b;
      });
}

TensorStrategy edge_coloring_strategy() {
  const CMatrix one{{1}}, zero{{0}};
  std::vector<Povm> side{Povm({one, zero}), Povm({zero, one})};
  return TensorStrategy(side, side, CVector{1});
}

SynchronousGame trivial_game(std::size_t questions, std::size_t answers) {
  return SynchronousGame::from_predicate(
      questions, answers,
      [](std::size_t x, std::size_t y, std::size_t a, std::size_t b) { return x != y || a == b; });
}

PlantedStrategy planted_strategy(const PmeStrategy& ideal, std::size_t junk_a,
                                 std::size_t junk_b, std::size_t schmidt_rank, Rng& rng) {
  if (junk_a == 0 || junk_b == 0 || schmidt_rank == 0 ||
      schmidt_rank > std::min(junk_a, junk_b))
    throw std::invalid_argument("planted_strategy: need 1 <= rank <= min(sA, sB)");
  const std::size_t d = ideal.dim();

  const CMatrix ua = random_isometry(junk_a, schmidt_rank, rng);
  const CMatrix ub = random_isometry(junk_b, schmidt_rank, rng);
  std::uniform_real_distribution<double> coef(0.2, 1.0);
  CVector aux(junk_a * junk_b);
  for (std::size_t k = 0; k < schmidt_rank; ++k) {
    const double c = coef(rng);
    for (std::size_t i = 0; i < junk_a; ++i)
      for (std::size_t j = 0; j < junk_b; ++j) aux[i * junk_b + j] += c * ua(i, k) * ub(j, k);
  }
  aux = aux.normalized();

  PlantedStrategy out{
      TensorStrategy({Povm({CMatrix{{1}}})}, {Povm({CMatrix{{1}}})}, CVector{1}),
      haar_unitary(d * junk_a, rng),
      haar_unitary(d * junk_b, rng),
      aux,
      junk_a,
      junk_b};

  const CMatrix ia = CMatrix::identity(junk_a), ib = CMatrix::identity(junk_b);
  std::vector<Povm> alice, bob;
  for (const auto& family : ideal.projections()) {
    std::vector<CMatrix> ea, fb;
    for (const auto& p : family) {
      CMatrix e = out.unitary_a * tensor(p, ia) * out.unitary_a.adjoint();
      CMatrix f = out.unitary_b * tensor(p.transpose(), ib) * out.unitary_b.adjoint();
      ea.push_back(0.5 * (e + e.adjoint()));
      fb.push_back(0.5 * (f + f.adjoint()));
    }
    alice.emplace_back(std::move(ea));
    bob.emplace_back(std::move(fb));
  }
  const CVector joint = regroup_to_parties(tensor(maximally_entangled(d), aux), d, junk_a, d, junk_b);
  const CVector psi = tensor(out.unitary_a, out.unitary_b) * joint;
  out.strategy = TensorStrategy(std::move(alice), std::move(bob), psi.normalized());
  return out;
}

}  // namespace syncert::fixtures
