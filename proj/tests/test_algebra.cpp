#include <doctest.h>

#include "support.hpp"
#include "syncert/algebra.hpp"
#include "syncert/fixtures.hpp"

using namespace syncert;

namespace {

// U (A_k (x) I_s  (+)  B_k) U^* for a family A on C^da and B on C^db.
std::vector<CMatrix> direct_sum_family(const std::vector<CMatrix>& a, std::size_t s,
                                       const std::vector<CMatrix>& b, const CMatrix& u) {
  const std::size_t da = a.front().rows() * s, db = b.front().rows();
  std::vector<CMatrix> out;
  for (std::size_t k = 0; k < a.size(); ++k) {
    CMatrix m(da + db, da + db);
    const CMatrix top = tensor(a[k], CMatrix::identity(s));
    for (std::size_t i = 0; i < da; ++i)
      for (std::size_t j = 0; j < da; ++j) m(i, j) = top(i, j);
    for (std::size_t i = 0; i < db; ++i)
      for (std::size_t j = 0; j < db; ++j) m(da + i, da + j) = b[k](i, j);
    out.push_back(u * m * u.adjoint());
  }
  return out;
}

std::vector<CMatrix> flat(const PmeStrategy& s) {
  std::vector<CMatrix> out;
  for (const auto& f : s.projections())
    for (const auto& p : f) out.push_back(p);
  return out;
}

}  // namespace

TEST_SUITE("algebra") {
  TEST_CASE("operator families are labelled and evaluate words") {
    const auto f = OperatorFamily::from_pme(fixtures::two_mub_qubit());
    CHECK(f.size() == 4);
    CHECK(f.find({1, 0}) != nullptr);
    CHECK(f.find({2, 0}) == nullptr);
    CHECK_THROWS_AS(f.at({2, 0}), std::out_of_range);
    OperatorFamily g(2);
    g.add({0, 0}, CMatrix::identity(2));
    CHECK_THROWS_AS(g.add({0, 0}, CMatrix::identity(2)), std::invalid_argument);
    CHECK_THROWS_AS(g.add({0, 1}, CMatrix::identity(3)), DimensionError);
    const Word w{{0, 0}, {1, 0}};
    CHECK(testing::max_abs_diff(f.evaluate(w), f.at({0, 0}) * f.at({1, 0})) == 0.0);
    CHECK(testing::max_abs_diff(f.evaluate({}), CMatrix::identity(2)) == 0.0);
    CHECK(to_string(w) == "e(0,0)e(1,0)");
  }

  TEST_CASE("commutants and generated algebras of reference families") {
    const auto mub = OperatorFamily::from_pme(fixtures::two_mub_qubit());
    CHECK(commutant_basis(mub).size() == 1);
    CHECK(is_irreducible(mub));
    CHECK(word_closure(mub).dimension() == 4);

    const auto comp = OperatorFamily::from_pme(fixtures::computational_qubit());
    CHECK(commutant_basis(comp).size() == 2);
    CHECK_FALSE(is_irreducible(comp));
    CHECK(word_closure(comp).dimension() == 2);

    Rng rng(41);
    const auto planted = fixtures::planted_strategy(fixtures::two_mub_qubit(), 3, 1, 1, rng);
    std::vector<CMatrix> ops;
    for (const auto& povm : planted.strategy.alice())
      for (const auto& e : povm.effects()) ops.push_back(e);
    const auto fam = OperatorFamily::from_list(ops);
    CHECK(commutant_basis(fam).size() == 9);  // I_2 (x) M_3
    const auto span = word_closure(fam);
    CHECK(span.dimension() == 4);
    CHECK(span.stabilized);
    const auto basis = commutant_basis(fam);
    for (const auto& b : basis)
      for (const auto& a : ops) CHECK((a * b - b * a).frobenius_norm() <= 1e-9);
  }

  TEST_CASE("channel fixed points coincide with the commutant") {
    Rng rng(42);
    std::vector<OperatorFamily> families{
        OperatorFamily::from_pme(fixtures::two_mub_qubit()),
        OperatorFamily::from_pme(fixtures::computational_qubit()),
        OperatorFamily::from_pme(fixtures::magic_square_pme())};
    const auto planted = fixtures::planted_strategy(fixtures::two_mub_qubit(), 2, 1, 1, rng);
    std::vector<std::vector<CMatrix>> idx;
    for (const auto& povm : planted.strategy.alice()) idx.push_back(povm.effects());
    families.push_back(OperatorFamily::from_indexed(idx));
    for (const auto& f : families) {
      const auto fixed = channel_fixed_points(f);
      const auto comm = commutant_basis(f);
      CHECK(fixed.size() == comm.size());
      CHECK(span_distance(fixed, comm) <= 1e-9);
    }
    // Different spans are far apart.
    CHECK(span_distance({CMatrix{{1, 0}, {0, 0}}}, {CMatrix{{0, 0}, {0, 1}}}) ==
          doctest::Approx(1.0));
  }

  TEST_CASE("block diagonalization recovers dimensions and multiplicities") {
    Rng rng(43);
    const auto mub = flat(fixtures::two_mub_qubit());
    // One-dimensional representation: both questions answer 0.
    const std::vector<CMatrix> one{CMatrix{{1}}, CMatrix{{0}}, CMatrix{{1}}, CMatrix{{0}}};
    const CMatrix u = haar_unitary(2 * 2 + 1, rng);
    const auto ops = direct_sum_family(mub, 2, one, u);
    const auto bd = block_diagonalize(OperatorFamily::from_list(ops), rng);
    REQUIRE(bd.blocks.size() == 2);
    std::vector<std::pair<std::size_t, std::size_t>> got;
    for (const auto& b : bd.blocks) got.emplace_back(b.dim, b.multiplicity);
    std::sort(got.begin(), got.end());
    CHECK(got[0] == std::pair<std::size_t, std::size_t>{1, 1});
    CHECK(got[1] == std::pair<std::size_t, std::size_t>{2, 2});
    CHECK(bd.residual <= 1e-8);
    CHECK(testing::max_abs_diff(bd.unitary * bd.unitary.adjoint(), CMatrix::identity(5)) <= 1e-10);
    for (std::size_t i = 0; i < bd.blocks.size(); ++i) {
      const std::size_t off = bd.offset(i), s = bd.blocks[i].multiplicity;
      for (std::size_t k = 0; k < ops.size(); ++k) {
        const CMatrix conj = bd.unitary * ops[k] * bd.unitary.adjoint();
        const CMatrix expected = tensor(bd.images[i][k], CMatrix::identity(s));
        for (std::size_t r = 0; r < expected.rows(); ++r)
          for (std::size_t c = 0; c < expected.cols(); ++c)
            CHECK(std::abs(conj(off + r, off + c) - expected(r, c)) <= 1e-9);
      }
    }
  }

  TEST_CASE("irreducible families give a single block") {
    const auto bd = block_diagonalize(OperatorFamily::from_pme(fixtures::magic_square_pme()));
    REQUIRE(bd.blocks.size() == 1);
    CHECK(bd.blocks[0].dim == 4);
    CHECK(bd.blocks[0].multiplicity == 1);
  }

  TEST_CASE("intertwiners between equivalent families") {
    Rng rng(44);
    const auto a = flat(fixtures::two_mub_qubit());
    const CMatrix w = haar_unitary(2, rng);
    std::vector<CMatrix> b;
    for (const auto& m : a) b.push_back(w * m * w.adjoint());
    const CMatrix t = intertwiner(a, b);
    REQUIRE(t.rows() == 2);
    for (std::size_t k = 0; k < a.size(); ++k)
      CHECK(testing::max_abs_diff(t * a[k] * t.adjoint(), b[k]) <= 1e-9);
    CHECK(testing::max_abs_diff(t.adjoint() * t, CMatrix::identity(2)) <= 1e-10);

    const std::vector<CMatrix> p{CMatrix{{1, 0}, {0, 0}}, CMatrix{{0, 0}, {0, 1}}};
    const std::vector<CMatrix> q{CMatrix::identity(2), CMatrix(2, 2)};
    CHECK(intertwiner(p, q).rows() == 0);
  }

  TEST_CASE("game relations") {
    const auto ms = OperatorFamily::from_pme(fixtures::magic_square_pme());
    const auto game = lcs_to_sync_game(fixtures::magic_square_system());
    const auto ok = check_game_relations(ms, game, 1e-9);
    CHECK(ok.passed);
    CHECK(ok.worst() <= 1e-12);

    const auto mub = OperatorFamily::from_pme(fixtures::two_mub_qubit());
    const auto bad = check_game_relations(mub, fixtures::edge_coloring_game());
    CHECK_FALSE(bad.passed);
    CHECK(bad.orthogonality == doctest::Approx(std::sqrt(0.5)));

    CHECK_THROWS_AS(check_game_relations(mub, fixtures::trivial_game(3, 2)), std::invalid_argument);
  }

  TEST_CASE("normalized trace of words") {
    const auto mub = OperatorFamily::from_pme(fixtures::two_mub_qubit());
    CHECK(std::abs(trace_of_representation(mub, {{0, 0}, {1, 0}}) - 0.25) <= 1e-15);
    CHECK(std::abs(trace_of_representation(mub, {}) - 1.0) <= 1e-15);
    CHECK_THROWS_AS(trace_of_representation(mub, {{5, 0}}), std::out_of_range);
  }

  TEST_CASE("trace ideal and GNS kernel agree") {
    const auto mub = OperatorFamily::from_pme(fixtures::two_mub_qubit());
    const Letter e00{0, 0}, e01{0, 1}, e10{1, 0};
    const std::vector<AlgebraElement> elems{
        {{1.0, {e00}}},                           // nonzero projection
        {{1.0, {e00, e00}}, {-1.0, {e00}}},       // idempotence, zero
        {{1.0, {e00, e01}}},                      // orthogonal product, zero
        {{1.0, {e00, e10}}, {cplx(0, 1), {e01}}}, // nonzero mixture
        {}};                                      // empty sum
    const auto r = check_gns_kernel(mub, elems);
    REQUIRE(r.entries.size() == 5);
    CHECK(r.mismatches == 0);
    CHECK_FALSE(r.entries[0].in_ideal);
    CHECK(r.entries[1].in_ideal);
    CHECK(r.entries[1].in_kernel);
    CHECK(r.entries[2].in_kernel);
    CHECK_FALSE(r.entries[3].in_kernel);
    CHECK(r.entries[4].in_kernel);
    for (const auto& e : r.entries) CHECK(std::abs(e.gns_norm - e.operator_norm) <= 1e-9);
    CHECK(r.kernel_tol == doctest::Approx(std::sqrt(2 * r.tol)));
  }

  TEST_CASE("commuting strategy from the trace and synchronous state checks") {
    const auto pme = fixtures::two_mub_qubit();
    const auto game = fixtures::trivial_game(2, 2);
    const auto cs = trace_to_commuting_strategy(OperatorFamily::from_pme(pme), game);
    const auto p = commuting_correlation(cs, 2, 2);
    CHECK(l1_distance(p, correlation_of_pme(pme)) <= 1e-12);

    Rng rng(45);
    const auto rep = sync_state_checks(cs.alice, cs.bob, cs.state, 1e-10, rng);
    CHECK(rep.passed);
    CHECK(rep.defect <= 1e-12);
    CHECK(rep.max_state_residual <= 1e-6);
    CHECK(rep.sampled_pairs == 200);

    // Non-commuting families are rejected.
    CHECK_THROWS_AS(sync_state_checks(cs.alice, cs.alice, cs.state, 1e-10, rng),
                    std::invalid_argument);
  }

  TEST_CASE("state residuals obey the defect bounds on a perturbed state") {
    const auto pme = fixtures::magic_square_pme();
    const auto cs = trace_to_commuting_strategy(OperatorFamily::from_pme(pme),
                                                lcs_to_sync_game(fixtures::magic_square_system()));
    Rng rng(46);
    const CVector noise = random_unit_vector(cs.state.size(), rng);
    const CVector psi = (cs.state + 1e-3 * noise).normalized();
    const auto rep = sync_state_checks(cs.alice, cs.bob, psi, 1e-5, rng, 100, 3);
    CHECK(rep.defect > 0.0);
    CHECK(rep.max_state_residual <= std::sqrt(rep.defect) + 1e-12);
    CHECK(rep.max_trace_ratio <= 1.0);
  }
}
