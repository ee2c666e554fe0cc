#include <doctest.h>

#include <set>

#include "support.hpp"
#include "syncert/certificates.hpp"
#include "syncert/fixtures.hpp"
#include "syncert/lcs.hpp"

using namespace syncert;

namespace {

std::size_t count(const SolutionGroupPresentation& p, RelationKind k) {
  std::size_t n = 0;
  for (const auto& r : p.relations) n += r.kind == k;
  return n;
}

}  // namespace

TEST_SUITE("lcs") {
  TEST_CASE("system validation") {
    CHECK_THROWS_AS(LcsSystem(1, 1, {}), std::invalid_argument);
    CHECK_THROWS_AS(LcsSystem(2, 2, {{{0, 0}, {1, 1}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(LcsSystem(2, 2, {{{0, 2}, {1, 1}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(LcsSystem(2, 2, {{{0, 1}, {1, 2}, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(LcsSystem(2, 2, {{{0, 1}, {1}, 0}}), std::invalid_argument);
    const LcsSystem s(3, 2, {{{0, 1}, {4, 2}, 5}});
    CHECK(s.constraints()[0].coefficients[0] == 1);
    CHECK(s.constraints()[0].rhs == 2);
    CHECK(std::abs(s.omega() - std::polar(1.0, 2.0 * M_PI / 3.0)) <= 1e-15);
  }

  TEST_CASE("solution group presentations") {
    const auto one = solution_group(LcsSystem(2, 1, {{{0}, {1}, 0}}));
    CHECK(one.generators == 2);
    CHECK(one.relations.size() == 4);
    CHECK(count(one, RelationKind::ConstraintProduct) == 1);

    const auto empty = solution_group(LcsSystem(3, 0, {}));
    CHECK(empty.generators == 1);
    REQUIRE(empty.relations.size() == 1);
    CHECK(empty.relations[0].kind == RelationKind::JOrder);
    CHECK(empty.relations[0].word.size() == 3);

    const auto ms = solution_group(fixtures::magic_square_system());
    CHECK(ms.generators == 10);
    CHECK(count(ms, RelationKind::GeneratorOrder) == 9);
    CHECK(count(ms, RelationKind::JOrder) == 1);
    CHECK(count(ms, RelationKind::JCentral) == 9);
    CHECK(count(ms, RelationKind::SupportCommutation) == 6 * 3);
    CHECK(count(ms, RelationKind::ConstraintProduct) == 6);
  }

  TEST_CASE("single constraint game") {
    const LcsSystem s(2, 2, {{{0, 1}, {1, 1}, 0}});
    const auto g = lcs_to_sync_game(s);
    CHECK(g.questions() == 1);
    CHECK(g.answers() == 4);
    // Answer index is the big-endian assignment: 00 -> 0, 11 -> 3.
    for (std::size_t a = 0; a < 4; ++a)
      for (std::size_t b = 0; b < 4; ++b)
        CHECK(g.wins(0, 0, a, b) == (a == b && (a == 0 || a == 3)));
    CHECK_THROWS_AS(lcs_to_sync_game(LcsSystem(2, 1, {})), std::invalid_argument);
  }

  TEST_CASE("game predicate matches brute-force enumeration") {
    // Two constraints sharing variable 1, different support sizes (padding).
    const LcsSystem s(3, 3, {{{0, 1}, {1, 2}, 1}, {{1}, {1}, 2}, {{2, 1, 0}, {1, 1, 1}, 0}});
    const auto g = lcs_to_sync_game(s);
    const std::size_t n = 27;
    REQUIRE(g.answers() == n);
    auto digits = [](std::size_t a) {
      return std::array<std::uint32_t, 3>{std::uint32_t(a / 9), std::uint32_t(a / 3 % 3),
                                          std::uint32_t(a % 3)};
    };
    // Full assignment for each answer (or none when invalid).
    auto assign = [&](std::size_t x, std::size_t a) -> std::optional<std::array<int, 3>> {
      const auto& c = s.constraints()[x];
      const auto t = digits(a);
      std::array<int, 3> v{-1, -1, -1};
      std::uint32_t sum = 0;
      for (std::size_t i = 0; i < 3; ++i) {
        if (i >= c.support.size()) {
          if (t[i] != 0) return std::nullopt;
          continue;
        }
        v[c.support[i]] = static_cast<int>(t[i]);
        sum += c.coefficients[i] * t[i];
      }
      if (sum % 3 != c.rhs) return std::nullopt;
      return v;
    };
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y)
        for (std::size_t a = 0; a < n; ++a)
          for (std::size_t b = 0; b < n; ++b) {
            const auto va = assign(x, a), vb = assign(y, b);
            bool expected = va && vb;
            if (expected)
              for (int i = 0; i < 3; ++i)
                if ((*va)[i] >= 0 && (*vb)[i] >= 0 && (*va)[i] != (*vb)[i]) expected = false;
            CHECK(g.wins(x, y, a, b) == expected);
          }
  }

  TEST_CASE("classical solutions give deterministic perfect strategies and conversely") {
    // Every system mod 2 on 3 variables from a small family of constraints.
    const std::vector<LcsConstraint> pool{
        {{0, 1}, {1, 1}, 0}, {{1, 2}, {1, 1}, 1}, {{0, 2}, {1, 1}, 1}, {{0, 1, 2}, {1, 1, 1}, 0}};
    for (unsigned mask = 1; mask < 16; ++mask) {
      std::vector<LcsConstraint> cs;
      for (unsigned i = 0; i < 4; ++i)
        if (mask & (1u << i)) cs.push_back(pool[i]);
      const LcsSystem s(2, 3, cs);
      const auto g = lcs_to_sync_game(s);

      std::set<std::array<std::uint32_t, 3>> solutions;
      for (std::uint32_t v = 0; v < 8; ++v) {
        const std::array<std::uint32_t, 3> val{v >> 2 & 1, v >> 1 & 1, v & 1};
        bool ok = true;
        for (const auto& c : cs) {
          std::uint32_t sum = 0;
          for (std::size_t i = 0; i < c.support.size(); ++i) sum += val[c.support[i]];
          ok = ok && sum % 2 == c.rhs;
        }
        if (ok) solutions.insert(val);
      }

      // Deterministic strategies: one answer per question, same for both players.
      std::size_t perfect = 0;
      std::vector<std::size_t> choice(cs.size(), 0);
      const std::size_t n = g.answers();
      std::set<std::array<std::uint32_t, 3>> recovered;
      while (true) {
        bool win = true;
        for (std::size_t x = 0; x < cs.size() && win; ++x)
          for (std::size_t y = 0; y < cs.size() && win; ++y) win = g.wins(x, y, choice[x], choice[y]);
        if (win) {
          ++perfect;
          std::array<std::uint32_t, 3> val{0, 0, 0};
          std::array<bool, 3> seen{false, false, false};
          for (std::size_t x = 0; x < cs.size(); ++x) {
            const auto t = *decode_answer(s, x, choice[x]);
            for (std::size_t i = 0; i < cs[x].support.size(); ++i) {
              val[cs[x].support[i]] = t[i];
              seen[cs[x].support[i]] = true;
            }
          }
          // Unconstrained variables are free; extend by every value.
          for (std::uint32_t free = 0; free < 8; ++free) {
            auto v = val;
            for (int i = 0; i < 3; ++i)
              if (!seen[i]) v[i] = free >> i & 1;
            recovered.insert(v);
          }
        }
        std::size_t k = 0;
        while (k < choice.size() && ++choice[k] == n) choice[k++] = 0;
        if (k == choice.size()) break;
      }
      CHECK((perfect > 0) == !solutions.empty());
      CHECK(recovered == solutions);
    }
  }

  TEST_CASE("magic square Pauli solution verifies") {
    const auto p = solution_group(fixtures::magic_square_system());
    const auto rep = fixtures::magic_square_pauli();
    const auto r = verify_operator_solution(p, rep, 1e-12);
    CHECK(r.passed);
    CHECK(r.max_relation_residual <= 1e-12);
    CHECK(r.j_residual <= 1e-12);
    CHECK(r.relation_residuals.size() == p.relations.size());

    auto missing = rep;
    missing.pop_back();
    CHECK_THROWS_AS(verify_operator_solution(p, missing, 1e-9), std::invalid_argument);
    auto wrong_dim = rep;
    wrong_dim[3] = CMatrix::identity(2);
    CHECK_THROWS_AS(verify_operator_solution(p, wrong_dim, 1e-9), std::invalid_argument);
  }

  TEST_CASE("trivial representation satisfies relations but not the J condition") {
    const LcsSystem s(2, 2, {{{0, 1}, {1, 1}, 0}});
    const std::vector<CMatrix> rep(3, CMatrix::identity(2));
    const auto r = verify_operator_solution(solution_group(s), rep, 1e-12);
    CHECK(r.max_relation_residual == 0.0);
    CHECK(r.j_residual == doctest::Approx(2.0));
    CHECK_FALSE(r.passed);
  }

  TEST_CASE("perturbed Pauli solution reports residuals at the noise scale") {
    Rng rng(61);
    auto rep = fixtures::magic_square_pauli();
    for (std::size_t i = 0; i + 1 < rep.size(); ++i) {
      CMatrix h = random_hermitian(4, rng);
      h *= 1e-4 / operator_norm(h);
      rep[i] = polar_factor(rep[i] + h);
    }
    const auto r = verify_operator_solution(solution_group(fixtures::magic_square_system()), rep, 1e-9);
    CHECK_FALSE(r.passed);
    CHECK(r.max_relation_residual > 1e-6);
    CHECK(r.max_relation_residual < 1e-2);
    CHECK(r.unitarity_residual <= 1e-12);
  }

  TEST_CASE("representation to strategy") {
    const LcsSystem one(2, 1, {{{0}, {1}, 0}, {{0}, {1}, 1}});
    // Inconsistent system: x = 0 and x = 1 cannot hold for a unitary with J = -I.
    CHECK_THROWS_AS(
        representation_to_strategy(one, {CMatrix{{1, 0}, {0, -1}}, -1.0 * CMatrix::identity(2)}),
        std::invalid_argument);

    const auto pme = fixtures::magic_square_pme();
    CHECK(pme.dim() == 4);
    CHECK(pme.questions() == 6);
    CHECK(pme.answers() == 8);
    const auto game = lcs_to_sync_game(fixtures::magic_square_system());
    CHECK(game_loss(correlation_of_pme(pme), game) <= 1e-12);
    const auto cert = spectral_certificate(pme);
    CHECK(cert.certified);
    CHECK(cert.gap() > 0.0);

    // Non-commuting support.
    const LcsSystem pair(2, 2, {{{0, 1}, {1, 1}, 0}});
    const CMatrix x{{0, 1}, {1, 0}}, z{{1, 0}, {0, -1}};
    CHECK_THROWS_AS(representation_to_strategy(pair, {x, z, -1.0 * CMatrix::identity(2)}),
                    std::invalid_argument);
  }

  TEST_CASE("single variable spectral projections") {
    // x = 1 mod 2 with g -> -I: the only assignment is 1.
    const LcsSystem s(2, 1, {{{0}, {1}, 1}});
    const auto pme = representation_to_strategy(s, {-1.0 * CMatrix::identity(1), CMatrix{{-1}}});
    CHECK(std::abs(pme.projection(0, 1)(0, 0) - 1.0) <= 1e-15);
    CHECK(std::abs(pme.projection(0, 0)(0, 0)) <= 1e-15);

    // x + y = 1 with g0 = Z, g1 = -Z: assignments 01 and 10 pick the two eigenspaces.
    const LcsSystem xy(2, 2, {{{0, 1}, {1, 1}, 1}});
    const CMatrix z{{1, 0}, {0, -1}};
    const auto p2 = representation_to_strategy(xy, {z, -1.0 * z, -1.0 * CMatrix::identity(2)});
    CHECK(testing::max_abs_diff(p2.projection(0, 1), CMatrix{{1, 0}, {0, 0}}) <= 1e-15);  // 01
    CHECK(testing::max_abs_diff(p2.projection(0, 2), CMatrix{{0, 0}, {0, 1}}) <= 1e-15);  // 10
  }

  TEST_CASE("strategy projections satisfy the game relations") {
    const auto pme = fixtures::magic_square_pme();
    const auto game = lcs_to_sync_game(fixtures::magic_square_system());
    for (std::size_t x = 0; x < 6; ++x)
      for (std::size_t a = 0; a < 8; ++a)
        for (std::size_t y = 0; y < 6; ++y)
          for (std::size_t b = 0; b < 8; ++b)
            if (!game.wins(x, y, a, b))
              CHECK(operator_norm(pme.projection(x, a) * pme.projection(y, b)) <= 1e-9);
  }
}
