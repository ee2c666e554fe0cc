#include "syncert/lcs.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>
#include <string>

namespace syncert {

namespace {

std::size_t ipow(std::size_t base, std::size_t e) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r *= base;
  return r;
}

CMatrix matrix_power(const CMatrix& u, std::uint32_t e) {
  CMatrix r = CMatrix::identity(u.rows());
  for (std::uint32_t i = 0; i < e; ++i) r = r * u;
  return r;
}

GroupRelation commutator(std::size_t g, std::size_t h, std::uint32_t d, RelationKind kind) {
  return {kind, {{g, 1}, {h, 1}, {g, d - 1}, {h, d - 1}}, 0};
}

}  // namespace

LcsSystem::LcsSystem(std::uint32_t modulus, std::size_t variables,
                     std::vector<LcsConstraint> constraints)
    : d_(modulus), n_(variables), constraints_(std::move(constraints)) {
  if (d_ < 2) throw std::invalid_argument("modulus must be at least 2");
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    auto& c = constraints_[k];
    const std::string where = "constraint " + std::to_string(k) + ": ";
    if (c.coefficients.size() != c.support.size())
      throw std::invalid_argument(where + "coefficient count differs from support size");
    std::vector<std::size_t> sorted = c.support;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument(where + "repeated support index");
    if (!sorted.empty() && sorted.back() >= n_)
      throw std::invalid_argument(where + "support index " + std::to_string(sorted.back()) +
                                  " out of range");
    for (auto& a : c.coefficients) {
      a %= d_;
      if (a == 0) throw std::invalid_argument(where + "coefficient is zero mod d");
    }
    c.rhs %= d_;
  }
}

std::size_t LcsSystem::max_support() const noexcept {
  std::size_t k = 1;
  for (const auto& c : constraints_) k = std::max(k, c.support.size());
  return k;
}

cplx LcsSystem::omega() const { return std::polar(1.0, 2.0 * std::numbers::pi / d_); }

std::string to_string(RelationKind k) {
  switch (k) {
    case RelationKind::GeneratorOrder: return "generator-order";
    case RelationKind::JOrder: return "J-order";
    case RelationKind::JCentral: return "J-central";
    case RelationKind::SupportCommutation: return "support-commutation";
    case RelationKind::ConstraintProduct: return "constraint-product";
  }
  return "unknown";
}

SolutionGroupPresentation solution_group(const LcsSystem& s) {
  const std::uint32_t d = s.modulus();
  const std::size_t j = s.variables();
  SolutionGroupPresentation p;
  p.modulus = d;
  p.generators = j + 1;
  p.j_index = j;

  // g^d would reduce to the empty word mod d, so orders are kept as d
  // single-exponent letters.
  auto order = [&](std::size_t g, RelationKind kind) {
    GroupRelation r{kind, std::vector<GroupLetter>(d, GroupLetter{g, 1}), 0};
    p.relations.push_back(std::move(r));
  };
  for (std::size_t g = 0; g < j; ++g) order(g, RelationKind::GeneratorOrder);
  order(j, RelationKind::JOrder);
  for (std::size_t g = 0; g < j; ++g)
    p.relations.push_back(commutator(g, j, d, RelationKind::JCentral));

  for (const auto& c : s.constraints())
    for (std::size_t u = 0; u < c.support.size(); ++u)
      for (std::size_t v = u + 1; v < c.support.size(); ++v)
        p.relations.push_back(
            commutator(c.support[u], c.support[v], d, RelationKind::SupportCommutation));

  for (const auto& c : s.constraints()) {
    GroupRelation r{RelationKind::ConstraintProduct, {}, c.rhs};
    for (std::size_t u = 0; u < c.support.size(); ++u)
      r.word.push_back({c.support[u], c.coefficients[u]});
    p.relations.push_back(std::move(r));
  }
  return p;
}

std::optional<std::vector<std::uint32_t>> decode_answer(const LcsSystem& s, std::size_t question,
                                                        std::size_t answer) {
  const std::uint32_t d = s.modulus();
  const std::size_t k = s.max_support();
  const auto& c = s.constraints().at(question);
  std::vector<std::uint32_t> t(k);
  for (std::size_t i = k; i-- > 0;) {
    t[i] = static_cast<std::uint32_t>(answer % d);
    answer /= d;
  }
  if (answer != 0) return std::nullopt;
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < k; ++i) {
    if (i >= c.support.size()) {
      if (t[i] != 0) return std::nullopt;
      continue;
    }
    sum += static_cast<std::uint64_t>(c.coefficients[i]) * t[i];
  }
  if (sum % d != c.rhs) return std::nullopt;
  return t;
}

std::size_t encode_answer(const LcsSystem& s, const std::vector<std::uint32_t>& assignment) {
  const std::size_t k = s.max_support();
  if (assignment.size() > k) throw DimensionError("assignment longer than the padded answer");
  std::size_t a = 0;
  for (std::size_t i = 0; i < k; ++i) {
    const std::uint32_t t = i < assignment.size() ? assignment[i] : 0;
    if (t >= s.modulus()) throw std::invalid_argument("assignment digit out of range");
    a = a * s.modulus() + t;
  }
  return a;
}

SynchronousGame lcs_to_sync_game(const LcsSystem& s) {
  const std::size_t m = s.constraints().size();
  if (m == 0) throw std::invalid_argument("a system without constraints has no game");
  const std::size_t n = ipow(s.modulus(), s.max_support());

  std::vector<std::vector<std::optional<std::vector<std::uint32_t>>>> decoded(m);
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t a = 0; a < n; ++a) decoded[x].push_back(decode_answer(s, x, a));

  return SynchronousGame::from_predicate(
      m, n, [&](std::size_t x, std::size_t y, std::size_t a, std::size_t b) {
        const auto& ta = decoded[x][a];
        const auto& tb = decoded[y][b];
        if (!ta || !tb) return false;
        const auto& sx = s.constraints()[x].support;
        const auto& sy = s.constraints()[y].support;
        for (std::size_t i = 0; i < sx.size(); ++i)
          for (std::size_t j = 0; j < sy.size(); ++j)
            if (sx[i] == sy[j] && (*ta)[i] != (*tb)[j]) return false;
        return true;
      });
}

OperatorSolutionReport verify_operator_solution(const SolutionGroupPresentation& p,
                                                const std::vector<CMatrix>& rep, double tol) {
  if (rep.size() != p.generators)
    throw std::invalid_argument("representation maps " + std::to_string(rep.size()) +
                                " generators, presentation has " +
                                std::to_string(p.generators));
  const std::size_t dim = rep.front().rows();
  for (std::size_t g = 0; g < rep.size(); ++g)
    if (rep[g].rows() != dim || rep[g].cols() != dim)
      throw std::invalid_argument("generator " + std::to_string(g) + " has the wrong dimension");

  const CMatrix id = CMatrix::identity(dim);
  OperatorSolutionReport r;
  for (const auto& u : rep)
    r.unitarity_residual = std::max(r.unitarity_residual, operator_norm(u.adjoint() * u - id));

  const CMatrix& jmat = rep[p.j_index];
  for (const auto& rel : p.relations) {
    CMatrix w = id;
    for (const auto& l : rel.word) w = w * matrix_power(rep[l.generator], l.exponent);
    const double res = operator_norm(w - matrix_power(jmat, rel.j_power));
    r.relation_residuals.push_back(res);
    r.max_relation_residual = std::max(r.max_relation_residual, res);
  }

  const cplx omega = std::polar(1.0, 2.0 * std::numbers::pi / p.modulus);
  r.j_residual = operator_norm(jmat - omega * id);
  r.passed = r.max_relation_residual <= tol && r.j_residual <= tol && r.unitarity_residual <= tol;
  return r;
}

PmeStrategy representation_to_strategy(const LcsSystem& s, const std::vector<CMatrix>& rep) {
  constexpr double kTol = 1e-9;
  const auto report = verify_operator_solution(solution_group(s), rep, kTol);
  if (!report.passed)
    throw std::invalid_argument(
        "representation is not an operator solution (relation residual " +
        std::to_string(report.max_relation_residual) + ", J residual " +
        std::to_string(report.j_residual) + ")");

  const std::uint32_t d = s.modulus();
  const std::size_t dim = rep.front().rows();
  const cplx omega = s.omega();

  // P_v(t) = (1/d) sum_r omega^{-rt} U_v^r projects onto the omega^t eigenspace.
  std::vector<std::vector<CMatrix>> spectral(s.variables());
  for (std::size_t v = 0; v < s.variables(); ++v) {
    std::vector<CMatrix> powers{CMatrix::identity(dim)};
    for (std::uint32_t r = 1; r < d; ++r) powers.push_back(powers.back() * rep[v]);
    for (std::uint32_t t = 0; t < d; ++t) {
      CMatrix p(dim, dim);
      for (std::uint32_t r = 0; r < d; ++r)
        p += std::pow(omega, -static_cast<double>((r * t) % d)) * powers[r];
      spectral[v].push_back((1.0 / d) * p);
    }
  }

  const std::size_t n = ipow(d, s.max_support());
  std::vector<std::vector<CMatrix>> proj;
  for (std::size_t x = 0; x < s.constraints().size(); ++x) {
    const auto& support = s.constraints()[x].support;
    for (std::size_t u = 0; u < support.size(); ++u)
      for (std::size_t v = u + 1; v < support.size(); ++v) {
        const CMatrix& a = rep[support[u]];
        const CMatrix& b = rep[support[v]];
        if (operator_norm(a * b - b * a) > kTol)
          throw std::invalid_argument("generators " + std::to_string(support[u]) + " and " +
                                      std::to_string(support[v]) + " of constraint " +
                                      std::to_string(x) + " do not commute");
      }
    std::vector<CMatrix> family;
    for (std::size_t a = 0; a < n; ++a) {
      const auto t = decode_answer(s, x, a);
      if (!t) {
        family.emplace_back(dim, dim);
        continue;
      }
      CMatrix p = CMatrix::identity(dim);
      for (std::size_t i = 0; i < support.size(); ++i) p = p * spectral[support[i]][(*t)[i]];
      family.push_back(0.5 * (p + p.adjoint()));
    }
    proj.push_back(std::move(family));
  }
  return PmeStrategy(std::move(proj), kTol);
}

}  // namespace syncert
