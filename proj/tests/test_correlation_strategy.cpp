#include <doctest.h>

#include "support.hpp"
#include "syncert/correlation.hpp"
#include "syncert/fixtures.hpp"
#include "syncert/games.hpp"
#include "syncert/strategy.hpp"

using namespace syncert;

namespace {

Correlation naive_tensor_correlation(const TensorStrategy& s) {
  Correlation p(s.questions_a(), s.questions_b(), s.answers_a(), s.answers_b());
  for (std::size_t x = 0; x < s.questions_a(); ++x)
    for (std::size_t y = 0; y < s.questions_b(); ++y)
      for (std::size_t a = 0; a < s.answers_a(); ++a)
        for (std::size_t b = 0; b < s.answers_b(); ++b) {
          const CMatrix op = testing::naive_kron(s.alice(x)[a], s.bob(y)[b]);
          p(x, y, a, b) =
              testing::naive_inner(s.state(), testing::naive_apply(op, s.state())).real();
        }
  return p;
}

TensorStrategy random_strategy(std::size_t da, std::size_t db, Rng& rng) {
  auto povms = [&](std::size_t d) {
    std::vector<Povm> out;
    for (int x = 0; x < 2; ++x) {
      // POVM from a random isometry: E_a = V^* P_a V.
      const CMatrix v = random_isometry(3 * d, d, rng);
      std::vector<CMatrix> effects;
      for (std::size_t a = 0; a < 3; ++a) {
        CMatrix p(3 * d, 3 * d);
        for (std::size_t i = a * d; i < (a + 1) * d; ++i) p(i, i) = 1;
        CMatrix e = v.adjoint() * p * v;
        effects.push_back(0.5 * (e + e.adjoint()));
      }
      out.emplace_back(effects);
    }
    return out;
  };
  auto alice = povms(da);
  auto bob = povms(db);
  return TensorStrategy(alice, bob, random_unit_vector(da * db, rng));
}

}  // namespace

TEST_SUITE("correlation") {
  TEST_CASE("validation, synchronicity and l1 distance") {
    Correlation p(1, 1, 2, 2, {0.5, 0.0, 0.0, 0.5});
    CHECK(p.validate().ok);
    CHECK(is_synchronous(p));
    Correlation q(1, 1, 2, 2, {0.5, 0.1, 0.0, 0.4});
    const auto r = is_synchronous(q);
    CHECK_FALSE(r);
    CHECK(r.max_violation == doctest::Approx(0.1));
    CHECK(l1_distance(p, q) == doctest::Approx(0.2));
    CHECK_THROWS_AS(l1_distance(p, Correlation(1, 1, 2, 3)), DimensionError);
    CHECK_THROWS_AS(Correlation(1, 1, 2, 2, {1.0}), DimensionError);
    Correlation bad(1, 1, 1, 2, {0.7, 0.7});
    CHECK_FALSE(bad.validate().ok);
    CHECK(bad.validate().worst_normalization_error == doctest::Approx(0.4));
  }

  TEST_CASE("game loss counts rejected cells") {
    const auto g = fixtures::edge_coloring_game();
    const auto s = fixtures::edge_coloring_strategy();
    const auto p = correlation_of_tensor(s);
    CHECK(game_loss(p, g) == 0.0);
    CHECK(is_perfect(p, g));
    // Always answering 0 loses on both off-diagonal questions.
    Correlation zero(2, 2, 2, 2);
    for (std::size_t x = 0; x < 2; ++x)
      for (std::size_t y = 0; y < 2; ++y) zero(x, y, 0, 0) = 1.0;
    CHECK(game_loss(zero, g) == doctest::Approx(2.0));
  }
}

TEST_SUITE("strategy") {
  TEST_CASE("POVM checks report each defect") {
    const auto good = Povm::check({CMatrix{{0.5, 0}, {0, 0.5}}, CMatrix{{0.5, 0}, {0, 0.5}}});
    CHECK(good.ok);
    const auto deficient = Povm::check({CMatrix{{0.45, 0}, {0, 0.45}}, CMatrix{{0.45, 0}, {0, 0.45}}});
    CHECK_FALSE(deficient.ok);
    CHECK(deficient.completeness_residual == doctest::Approx(0.1));
    const auto negative = Povm::check({CMatrix{{1.2, 0}, {0, 1}}, CMatrix{{-0.2, 0}, {0, 0}}});
    CHECK(negative.max_negativity == doctest::Approx(0.2));
    CHECK_THROWS_AS(Povm({CMatrix{{0.5}}}), std::invalid_argument);
    CHECK(Povm({CMatrix{{0.5}}, CMatrix{{0.5}}}).projectivity_residual() == doctest::Approx(0.25));
  }

  TEST_CASE("tensor correlation matches the naive expectation") {
    Rng rng(21);
    for (int trial = 0; trial < 5; ++trial) {
      const auto s = random_strategy(2, 3, rng);
      const auto p = correlation_of_tensor(s);
      const auto q = naive_tensor_correlation(s);
      CHECK(l1_distance(p, q) <= 1e-12);
      CHECK(p.validate().ok);
      // Pure state as a density matrix.
      const MixedStrategy m(s.alice(), s.bob(), DensityMatrix::from_pure(s.state()));
      CHECK(l1_distance(correlation_of_mixed(m), p) <= 1e-12);
    }
  }

  TEST_CASE("PME correlation equals the tensor form and is synchronous") {
    for (const auto& pme : {fixtures::trivial_pme(), fixtures::computational_qubit(),
                            fixtures::two_mub_qubit(), fixtures::magic_square_pme()}) {
      const auto p = correlation_of_pme(pme);
      const auto q = naive_tensor_correlation(pme_as_tensor(pme));
      CHECK(l1_distance(p, q) <= 1e-10);
      CHECK(is_synchronous(p));
    }
    const auto p = correlation_of_pme(fixtures::two_mub_qubit());
    CHECK(p(0, 1, 0, 0) == doctest::Approx(0.25));
    CHECK(p(0, 0, 0, 0) == doctest::Approx(0.5));
  }

  TEST_CASE("PME validation rejects non-projective families") {
    CHECK_THROWS_AS(PmeStrategy({{CMatrix{{0.5, 0}, {0, 0.5}}, CMatrix{{0.5, 0}, {0, 0.5}}}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(maximally_entangled(0), std::invalid_argument);
    const CVector me = maximally_entangled(2);
    CHECK(std::abs(me[0] - 1.0 / std::sqrt(2.0)) <= 1e-15);
    CHECK(std::abs(me[3] - 1.0 / std::sqrt(2.0)) <= 1e-15);
  }

  TEST_CASE("reduced states and support restriction") {
    Rng rng(22);
    const auto s = random_strategy(2, 3, rng);
    const auto rs = reduced_states(s);
    const CMatrix rho = outer(s.state(), s.state());
    CHECK(testing::max_abs_diff(rs.rho_a.matrix(), partial_trace(rho, 2, 3, Side::A)) <= 1e-14);
    CHECK(testing::max_abs_diff(rs.rho_b.matrix(), partial_trace(rho, 2, 3, Side::B)) <= 1e-14);

    // The Schmidt rank is at most 2, so Bob's side shrinks to 2 levels.
    const auto r = restrict_to_support(s);
    CHECK(r.dim_a() == 2);
    CHECK(r.dim_b() == 2);
    CHECK(l1_distance(correlation_of_tensor(r), correlation_of_tensor(s)) <= 1e-9);
  }

  TEST_CASE("transposed family") {
    const auto f = transposed_family({{CMatrix{{1, cplx(0, 1)}, {2, 3}}}});
    CHECK(f[0][0](0, 1) == cplx(2, 0));
    CHECK(f[0][0](1, 0) == cplx(0, 1));
  }
}

TEST_SUITE("games") {
  TEST_CASE("synchronicity is enforced at construction") {
    CHECK_THROWS_AS(SynchronousGame::from_predicate(1, 2, [](auto, auto, auto, auto) { return true; }),
                    std::invalid_argument);
    CHECK_THROWS_AS(SynchronousGame::from_zero_cells(1, 2, {{0, 0, 0, 2}}), DimensionError);
    const auto g = SynchronousGame::from_zero_cells(1, 2, {{0, 0, 0, 1}, {0, 0, 1, 0}});
    CHECK(g.wins(0, 0, 0, 0));
    CHECK_FALSE(g.wins(0, 0, 0, 1));
    CHECK(g.zero_cells().size() == 2);
    CHECK(SynchronousGame::from_zero_cells(1, 2, g.zero_cells()) == g);
  }

  TEST_CASE("or_game matches the defining predicate on every cell") {
    Rng rng(31);
    std::bernoulli_distribution coin(0.6);
    for (std::size_t m1 = 1; m1 <= 3; ++m1)
      for (std::size_t n1 = 1; n1 <= 3; ++n1)
        for (std::size_t m2 = 1; m2 <= 2; ++m2)
          for (std::size_t n2 = 1; n2 <= 3; ++n2) {
            auto random_game = [&](std::size_t m, std::size_t n) {
              std::vector<std::uint8_t> t(m * m * n * n);
              for (auto& v : t) v = coin(rng);
              return SynchronousGame::from_predicate(m, n, [&, t](auto x, auto y, auto a, auto b) {
                return (x != y || a == b) && t[((x * m + y) * n + a) * n + b];
              });
            };
            const auto g1 = random_game(m1, n1), g2 = random_game(m2, n2);
            const auto g = or_game(g1, g2);
            REQUIRE(g.questions() == m1 * m2);
            REQUIRE(g.answers() == n1 + n2);
            for (std::size_t x1 = 0; x1 < m1; ++x1)
              for (std::size_t x2 = 0; x2 < m2; ++x2)
                for (std::size_t y1 = 0; y1 < m1; ++y1)
                  for (std::size_t y2 = 0; y2 < m2; ++y2)
                    for (std::size_t a = 0; a < n1 + n2; ++a)
                      for (std::size_t b = 0; b < n1 + n2; ++b) {
                        bool expected = false;
                        if (a < n1 && b < n1) expected = g1.wins(x1, y1, a, b);
                        if (a >= n1 && b >= n1) expected = g2.wins(x2, y2, a - n1, b - n1);
                        CHECK(g.wins(or_question(x1, x2, m2), or_question(y1, y2, m2), a, b) ==
                              expected);
                      }
          }
  }

  TEST_CASE("lifting a perfect strategy keeps it perfect and question-independent") {
    const auto g1 = fixtures::edge_coloring_game();
    const auto g2 = fixtures::trivial_game(3, 2);
    const auto lifted = lift_strategy(fixtures::edge_coloring_strategy(), g1, g2);
    CHECK(game_loss(correlation_of_tensor(lifted), or_game(g1, g2)) <= 1e-12);
    const auto r = check_or_independence(lifted, g1, g2);
    CHECK(r.perfect);
    CHECK(r.projective);
    CHECK(r.max_gap() <= 1e-12);

    const auto pme = fixtures::two_mub_qubit();
    const auto tg = fixtures::trivial_game(2, 2);
    const auto lifted_pme = lift_strategy(pme_as_tensor(pme), tg, g2);
    CHECK(check_or_independence(lifted_pme, tg, g2).max_gap() <= 1e-12);
  }

  TEST_CASE("lifting rejects imperfect strategies") {
    const auto g1 = fixtures::edge_coloring_game();
    const auto same = TensorStrategy({Povm({CMatrix{{1}}, CMatrix{{0}}}), Povm({CMatrix{{1}}, CMatrix{{0}}})},
                                     {Povm({CMatrix{{1}}, CMatrix{{0}}}), Povm({CMatrix{{1}}, CMatrix{{0}}})},
                                     CVector{1});
    CHECK_THROWS_AS(lift_strategy(same, g1, fixtures::trivial_game(1, 1)), std::invalid_argument);
  }

  TEST_CASE("question-dependent answers are detected") {
    // Alice answers from A2 on (0,0) and from A1 on (0,1): A1 marginals differ.
    const auto g1 = fixtures::trivial_game(1, 2);
    const auto g2 = fixtures::trivial_game(2, 1);
    const CMatrix one{{1}}, zero{{0}};
    std::vector<Povm> side{Povm({zero, zero, one}), Povm({one, zero, zero})};
    const TensorStrategy s(side, side, CVector{1});
    const auto r = check_or_independence(s, g1, g2);
    CHECK(r.max_gap_a1 == doctest::Approx(1.0));
    CHECK(r.max_gap_a2 == doctest::Approx(0.0));
  }
}
