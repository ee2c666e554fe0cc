#include "syncert/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace syncert {

namespace {

constexpr double kNullTolerance = 1e-9;
constexpr double kClusterGap = 1e-6;
constexpr double kReconstructionTolerance = 1e-8;

cplx frob_inner(const CMatrix& a, const CMatrix& b) {
  cplx s = 0.0;
  const auto ae = a.entries();
  const auto be = b.entries();
  for (std::size_t i = 0; i < ae.size(); ++i) s += std::conj(ae[i]) * be[i];
  return s;
}

// Gram matrix sum_k L_k^* L_k of the Sylvester systems
// L_k = A_k (x) I - I (x) B_k^T, whose common null space is {T : A_k T = T B_k}.
// Expanded termwise so the cost stays at (nm)^2 per generator.
CMatrix sylvester_gram(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  const std::size_t n = a.front().rows();
  const std::size_t m = b.front().rows();
  const CMatrix in = CMatrix::identity(n);
  const CMatrix im = CMatrix::identity(m);
  CMatrix gram(n * m, n * m);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const CMatrix ad = a[k].adjoint();
    const CMatrix bt = b[k].transpose();
    const CMatrix bc = b[k].conjugate();
    gram += tensor(ad * a[k], im);
    gram -= tensor(ad, bt);
    gram -= tensor(a[k], bc);
    gram += tensor(in, bc * bt);
  }
  return gram;
}

// Eigenvectors of a PSD Gram matrix whose eigenvalue is below
// kNullTolerance * max(1, lambda_max).
std::vector<CVector> gram_nullspace(const CMatrix& gram) {
  const auto es = eigh(0.5 * (gram + gram.adjoint()));
  const double cutoff = kNullTolerance * std::max(1.0, es.values.empty() ? 0.0 : es.values.front());
  std::vector<CVector> out;
  for (std::size_t i = es.values.size(); i-- > 0;) {
    if (es.values[i] > cutoff) break;
    out.push_back(es.vectors[i]);
  }
  return out;
}

std::vector<CMatrix> with_adjoints(const std::vector<CMatrix>& ops) {
  std::vector<CMatrix> out = ops;
  for (const auto& a : ops)
    if (!a.is_hermitian(1e-14)) out.push_back(a.adjoint());
  return out;
}

std::vector<CMatrix> commutant_of(const std::vector<CMatrix>& ops, std::size_t d) {
  const auto null = gram_nullspace(sylvester_gram(ops, ops));

  std::vector<CMatrix> basis;
  basis.push_back((1.0 / std::sqrt(static_cast<double>(d))) * CMatrix::identity(d));
  for (const auto& v : null) {
    CMatrix c = mat(v, d, d);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) c -= frob_inner(b, c) * b;
    const double norm = c.frobenius_norm();
    if (norm > 1e-6) basis.push_back((1.0 / norm) * c);
  }
  return basis;
}

std::vector<CMatrix> restrict_ops(const std::vector<CMatrix>& ops, const CMatrix& q) {
  std::vector<CMatrix> out;
  out.reserve(ops.size());
  const CMatrix qa = q.adjoint();
  for (const auto& a : ops) out.push_back(qa * a * q);
  return out;
}

CMatrix columns(const CMatrix& m, const std::vector<std::size_t>& idx) {
  CMatrix out(m.rows(), idx.size());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(i, idx[j]);
  return out;
}

// Splits the invariant subspace range(q) into irreducible invariant subspaces.
void split_irreducible(const std::vector<CMatrix>& ops, const CMatrix& q, Rng& rng,
                       std::vector<CMatrix>& out, int depth = 0) {
  const std::size_t k = q.cols();
  const auto local = restrict_ops(ops, q);
  const auto comm = commutant_of(local, k);
  if (comm.size() == 1) {
    out.push_back(q);
    return;
  }
  if (depth > 64) throw NumericalError("block_diagonalize: recursion did not terminate", 0.0);

  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix h(k, k);
    for (std::size_t i = 1; i < comm.size(); ++i) {
      const CMatrix& c = comm[i];
      const double r1 = gauss(rng);
      const double r2 = gauss(rng);
      h += r1 * (c + c.adjoint());
      h += cplx(0.0, r2) * (c - c.adjoint());
    }
    const auto es = eigh(0.5 * (h + h.adjoint()));
    const double spread = es.values.front() - es.values.back();
    if (!(spread > 1e-12)) continue;

    std::vector<std::vector<std::size_t>> clusters{{0}};
    for (std::size_t i = 1; i < k; ++i) {
      if (es.values[i - 1] - es.values[i] > kClusterGap * spread) clusters.emplace_back();
      clusters.back().push_back(i);
    }
    if (clusters.size() < 2) continue;

    CMatrix vecs(k, k);
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t i = 0; i < k; ++i) vecs(i, j) = es.vectors[j][i];
    for (const auto& cl : clusters) split_irreducible(ops, q * columns(vecs, cl), rng, out, depth + 1);
    return;
  }
  throw NumericalError("block_diagonalize: could not separate blocks of a reducible family",
                       static_cast<double>(comm.size()));
}

}  // namespace

// ------------------------------------------------------------------ words

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const auto& l : w) s += "e(" + std::to_string(l.x) + "," + std::to_string(l.a) + ")";
  return s;
}

OperatorFamily OperatorFamily::from_indexed(const std::vector<std::vector<CMatrix>>& ops) {
  if (ops.empty() || ops.front().empty()) throw std::invalid_argument("empty operator family");
  OperatorFamily f(ops.front().front().rows());
  for (std::size_t x = 0; x < ops.size(); ++x)
    for (std::size_t a = 0; a < ops[x].size(); ++a) f.add({x, a}, ops[x][a]);
  return f;
}

OperatorFamily OperatorFamily::from_pme(const PmeStrategy& s) {
  return from_indexed(s.projections());
}

OperatorFamily OperatorFamily::from_list(const std::vector<CMatrix>& ops) {
  if (ops.empty()) throw std::invalid_argument("empty operator family");
  OperatorFamily f(ops.front().rows());
  for (std::size_t i = 0; i < ops.size(); ++i) f.add({i, 0}, ops[i]);
  return f;
}

void OperatorFamily::add(Letter label, CMatrix op) {
  if (!op.is_square() || op.rows() != dim_)
    throw DimensionError("operator for e(" + std::to_string(label.x) + "," +
                         std::to_string(label.a) + ") is not " + std::to_string(dim_) + "x" +
                         std::to_string(dim_));
  if (find(label) != nullptr)
    throw std::invalid_argument("duplicate label e(" + std::to_string(label.x) + "," +
                                std::to_string(label.a) + ")");
  labels_.push_back(label);
  ops_.push_back(std::move(op));
}

const CMatrix* OperatorFamily::find(Letter l) const noexcept {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == l) return &ops_[i];
  return nullptr;
}

const CMatrix& OperatorFamily::at(Letter l) const {
  const CMatrix* p = find(l);
  if (p == nullptr)
    throw std::out_of_range("unknown letter e(" + std::to_string(l.x) + "," +
                            std::to_string(l.a) + ")");
  return *p;
}

CMatrix OperatorFamily::evaluate(const Word& w) const {
  CMatrix out = CMatrix::identity(dim_);
  for (const auto& l : w) out = out * at(l);
  return out;
}

// -------------------------------------------------------------- commutant

std::vector<CMatrix> commutant_basis(const OperatorFamily& f) {
  if (f.empty()) throw std::invalid_argument("commutant of an empty family");
  return commutant_of(f.operators(), f.dim());
}

bool is_irreducible(const OperatorFamily& f) { return commutant_basis(f).size() == 1; }

AlgebraSpan word_closure(const OperatorFamily& f, std::size_t max_len) {
  const std::size_t d = f.dim();
  if (max_len == 0) max_len = d * d;
  AlgebraSpan span;
  span.basis.push_back((1.0 / std::sqrt(static_cast<double>(d))) * CMatrix::identity(d));
  std::vector<CMatrix> frontier = span.basis;

  auto try_add = [&span](CMatrix c) -> bool {
    const double scale = c.frobenius_norm();
    if (scale == 0.0) return false;
    c *= 1.0 / scale;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : span.basis) c -= frob_inner(b, c) * b;
    const double norm = c.frobenius_norm();
    if (norm <= 1e-8) return false;
    span.basis.push_back((1.0 / norm) * c);
    return true;
  };

  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<CMatrix> next;
    for (const auto& w : frontier)
      for (const auto& g : f.operators())
        if (try_add(w * g)) next.push_back(span.basis.back());
    span.levels = len;
    if (next.empty() || span.basis.size() == d * d) {
      span.stabilized = true;
      break;
    }
    frontier = std::move(next);
  }
  return span;
}

std::vector<CMatrix> channel_fixed_points(const OperatorFamily& f) {
  const std::size_t d = f.dim();
  std::set<std::size_t> questions;
  for (const auto& l : f.labels()) questions.insert(l.x);
  const double inv_m = 1.0 / static_cast<double>(questions.size());

  CMatrix phi(d * d, d * d);
  for (const auto& e : f.operators()) phi += tensor(e, e.conjugate());
  phi *= inv_m;
  phi -= CMatrix::identity(d * d);

  const auto s = svd(phi);
  const double cutoff = 1e-8 * std::max(1.0, s.values.front());
  std::vector<CMatrix> out;
  for (std::size_t j = 0; j < s.values.size(); ++j) {
    if (s.values[j] > cutoff) continue;
    CVector v(d * d);
    for (std::size_t i = 0; i < d * d; ++i) v[i] = s.v(i, j);
    out.push_back(mat(v, d, d));
  }
  return out;
}

double span_distance(const std::vector<CMatrix>& u, const std::vector<CMatrix>& v) {
  if (u.empty() && v.empty()) return 0.0;
  const std::size_t n = (u.empty() ? v : u).front().entries().size();
  CMatrix p(n, n);
  auto accumulate = [&p](const std::vector<CMatrix>& list, double sign) {
    for (const auto& m : list) {
      const CVector w(std::vector<cplx>(m.entries().begin(), m.entries().end()));
      p += sign * outer(w, w);
    }
  };
  accumulate(u, 1.0);
  accumulate(v, -1.0);
  return operator_norm(p);
}

// --------------------------------------------------- block diagonalization

std::size_t BlockDecomposition::offset(std::size_t block) const {
  std::size_t off = 0;
  for (std::size_t i = 0; i < block; ++i) off += blocks[i].dim * blocks[i].multiplicity;
  return off;
}

CMatrix intertwiner(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("intertwiner: family sizes differ");
  const std::size_t n = a.front().rows();
  if (b.front().rows() != n) return {};
  // T A_k = B_k T  <=>  (B_k (x) I - I (x) A_k^T) vec(T) = 0.
  const auto null = gram_nullspace(sylvester_gram(b, a));
  if (null.empty()) return {};
  const CMatrix t = polar_factor(mat(null.front(), n, n));
  double worst = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, (t * a[k] * t.adjoint() - b[k]).frobenius_norm());
    scale = std::max(scale, b[k].frobenius_norm());
  }
  if (worst > kReconstructionTolerance * std::max(1.0, scale)) return {};
  return t;
}

BlockDecomposition block_diagonalize(const OperatorFamily& f, Rng& rng) {
  if (f.empty()) throw std::invalid_argument("block_diagonalize: empty family");
  const std::size_t d = f.dim();
  const auto gens = with_adjoints(f.operators());

  std::vector<CMatrix> irreps;
  split_irreducible(gens, CMatrix::identity(d), rng, irreps);

  // Group equivalent irreducible subspaces; copies are rotated so that every
  // copy carries exactly the representative's matrices.
  struct Class {
    std::vector<CMatrix> copies;
    std::vector<CMatrix> local;  // generators restricted to the representative
  };
  std::vector<Class> classes;
  for (const auto& q : irreps) {
    const auto local = restrict_ops(gens, q);
    bool placed = false;
    for (auto& c : classes) {
      if (c.copies.front().cols() != q.cols()) continue;
      const CMatrix t = intertwiner(local, c.local);
      if (t.rows() == 0) continue;
      c.copies.push_back(q * t.adjoint());
      placed = true;
      break;
    }
    if (!placed) classes.push_back({{q}, local});
  }

  BlockDecomposition out;
  CMatrix w(d, d);
  std::size_t off = 0;
  for (const auto& c : classes) {
    const std::size_t di = c.copies.front().cols();
    const std::size_t si = c.copies.size();
    for (std::size_t j = 0; j < si; ++j)
      for (std::size_t k = 0; k < di; ++k)
        for (std::size_t r = 0; r < d; ++r) w(r, off + k * si + j) = c.copies[j](r, k);
    out.blocks.push_back({di, si});
    out.images.push_back(restrict_ops(f.operators(), c.copies.front()));
    off += di * si;
  }
  if (off != d) throw NumericalError("block_diagonalize: blocks do not partition the space", 0.0);
  out.unitary = w.adjoint();

  const double unitarity = (out.unitary * w - CMatrix::identity(d)).frobenius_norm();
  double worst = unitarity;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const CMatrix& a = f.operators()[k];
    CMatrix ideal(d, d);
    for (std::size_t i = 0; i < out.blocks.size(); ++i) {
      const std::size_t base = out.offset(i);
      const auto [di, si] = out.blocks[i];
      for (std::size_t k1 = 0; k1 < di; ++k1)
        for (std::size_t k2 = 0; k2 < di; ++k2)
          for (std::size_t j = 0; j < si; ++j)
            ideal(base + k1 * si + j, base + k2 * si + j) = out.images[i][k](k1, k2);
    }
    const double scale = std::max(a.frobenius_norm(), 1e-300);
    worst = std::max(worst, (out.unitary * a * w - ideal).frobenius_norm() / scale);
  }
  out.residual = worst;
  if (worst > kReconstructionTolerance)
    throw NumericalError("block_diagonalize: reconstruction error too large", worst);
  return out;
}

BlockDecomposition block_diagonalize(const OperatorFamily& f) {
  Rng rng(kDefaultSeed);
  return block_diagonalize(f, rng);
}

// -------------------------------------------------------------- relations

double RelationReport::worst() const noexcept {
  return std::max({idempotence, hermiticity, completeness, orthogonality});
}

RelationReport check_game_relations(const OperatorFamily& f, const SynchronousGame& g,
                                    double tol) {
  const std::size_t m = g.questions(), n = g.answers();
  for (std::size_t x = 0; x < m; ++x)
    for (std::size_t a = 0; a < n; ++a)
      if (f.find({x, a}) == nullptr)
        throw std::invalid_argument("family is missing generator e(" + std::to_string(x) + "," +
                                    std::to_string(a) + ")");
  RelationReport r;
  const CMatrix id = CMatrix::identity(f.dim());
  for (std::size_t x = 0; x < m; ++x) {
    CMatrix sum(f.dim(), f.dim());
    for (std::size_t a = 0; a < n; ++a) {
      const CMatrix& e = f.at({x, a});
      r.idempotence = std::max(r.idempotence, operator_norm(e * e - e));
      r.hermiticity = std::max(r.hermiticity, operator_norm(e - e.adjoint()));
      sum += e;
    }
    r.completeness = std::max(r.completeness, operator_norm(sum - id));
  }
  for (const auto& [x, y, a, b] : g.zero_cells())
    r.orthogonality = std::max(r.orthogonality, operator_norm(f.at({x, a}) * f.at({y, b})));
  r.passed = r.worst() <= tol;
  return r;
}

cplx trace_of_representation(const OperatorFamily& f, const Word& w) {
  return f.evaluate(w).trace() / static_cast<double>(f.dim());
}

GnsReport check_gns_kernel(const OperatorFamily& f, const std::vector<AlgebraElement>& elements,
                           double tol) {
  GnsReport rep;
  rep.tol = tol;
  const double d = static_cast<double>(f.dim());
  rep.kernel_tol = std::sqrt(d * tol);
  const auto span = word_closure(f);
  const std::size_t k = span.dimension();

  for (const auto& element : elements) {
    CMatrix a(f.dim(), f.dim());
    for (const auto& t : element) a += t.coefficient * f.evaluate(t.word);

    GnsEntry e;
    e.trace_norm2 = std::max(0.0, (a.adjoint() * a).trace().real() / d);
    CMatrix left(k, k);
    for (std::size_t j = 0; j < k; ++j) {
      const CMatrix ab = a * span.basis[j];
      for (std::size_t i = 0; i < k; ++i) left(i, j) = frob_inner(span.basis[i], ab);
    }
    e.gns_norm = operator_norm(left);
    e.operator_norm = operator_norm(a);
    e.in_ideal = e.trace_norm2 <= tol;
    e.in_kernel = e.gns_norm <= rep.kernel_tol;
    // tau(a^* a) <= ||a||^2 <= d tau(a^* a), so both implications are exact.
    e.mismatch = (e.in_ideal && !e.in_kernel) || (e.gns_norm * e.gns_norm <= tol && !e.in_ideal);
    if (e.mismatch) ++rep.mismatches;
    rep.entries.push_back(e);
  }
  return rep;
}

SyncStateReport sync_state_checks(const OperatorFamily& alice, const OperatorFamily& bob,
                                  const CVector& state, double tol, Rng& rng,
                                  std::size_t samples, std::size_t max_len) {
  if (!(tol > 0.0)) throw std::invalid_argument("sync_state_checks: tol must be positive");
  if (alice.dim() != bob.dim() || state.size() != alice.dim())
    throw DimensionError("sync_state_checks: families and state act on different spaces");

  SyncStateReport r;
  for (const auto& a : alice.operators())
    for (const auto& b : bob.operators())
      r.commutation_residual = std::max(r.commutation_residual, operator_norm(a * b - b * a));
  if (r.commutation_residual > tol)
    throw std::invalid_argument("sync_state_checks: families do not commute (residual " +
                                std::to_string(r.commutation_residual) + ")");

  std::map<Letter, CVector> ev, fv;
  std::map<std::size_t, std::vector<std::size_t>> answers;
  for (const auto& l : alice.labels()) {
    ev[l] = alice.at(l) * state;
    fv[l] = bob.at(l) * state;
    answers[l.x].push_back(l.a);
  }

  for (const auto& [x, as] : answers) {
    double off = 0.0;
    for (std::size_t a : as)
      for (std::size_t b : as)
        if (a != b) off += inner(ev[{x, a}], fv[{x, b}]).real();
    r.defect = std::max(r.defect, off);
  }
  for (const auto& l : alice.labels())
    r.max_state_residual = std::max(r.max_state_residual, (ev[l] - fv[l]).norm());

  const auto& labels = alice.labels();
  std::uniform_int_distribution<std::size_t> pick(0, labels.size() - 1);
  std::uniform_int_distribution<std::size_t> length(1, std::max<std::size_t>(1, max_len));
  bool trace_ok = true;
  for (std::size_t s = 0; s < samples; ++s) {
    Word w(length(rng)), wp(length(rng));
    for (auto& l : w) l = labels[pick(rng)];
    for (auto& l : wp) l = labels[pick(rng)];
    const CMatrix ew = alice.evaluate(w);
    const CMatrix ewp = alice.evaluate(wp);
    const cplx lhs = inner(state, ew * (ewp * state));
    const cplx rhs = inner(state, ewp * (ew * state));
    const double residual = std::abs(lhs - rhs);
    const double bound = 2.0 * static_cast<double>(std::min(w.size(), wp.size())) * std::sqrt(tol);
    r.max_trace_residual = std::max(r.max_trace_residual, residual);
    r.max_trace_ratio = std::max(r.max_trace_ratio, residual / bound);
    if (residual > bound + 1e-12) trace_ok = false;
  }
  r.sampled_pairs = samples;
  r.passed = r.defect <= tol && r.max_state_residual <= std::sqrt(tol) + 1e-12 && trace_ok;
  return r;
}

CommutingStrategy trace_to_commuting_strategy(const OperatorFamily& f, const SynchronousGame& g,
                                              double tol) {
  const RelationReport rel = check_game_relations(f, g, tol);
  if (!rel.passed)
    throw std::invalid_argument("trace_to_commuting_strategy: relations fail (worst residual " +
                                std::to_string(rel.worst()) + ")");
  const std::size_t d = f.dim();
  const CMatrix id = CMatrix::identity(d);
  CommutingStrategy s{OperatorFamily(d * d), OperatorFamily(d * d), maximally_entangled(d)};
  for (std::size_t i = 0; i < f.size(); ++i) {
    s.alice.add(f.labels()[i], tensor(f.operators()[i], id));
    s.bob.add(f.labels()[i], tensor(id, f.operators()[i].transpose()));
  }
  return s;
}

Correlation commuting_correlation(const CommutingStrategy& s, std::size_t questions,
                                  std::size_t answers) {
  Correlation p(questions, questions, answers, answers);
  std::vector<CVector> bv(questions * answers);
  for (std::size_t y = 0; y < questions; ++y)
    for (std::size_t b = 0; b < answers; ++b) bv[y * answers + b] = s.bob.at({y, b}) * s.state;
  for (std::size_t x = 0; x < questions; ++x)
    for (std::size_t a = 0; a < answers; ++a) {
      // <psi|A B|psi> = <A^* psi, B psi>.
      const CVector av = s.alice.at({x, a}).adjoint() * s.state;
      for (std::size_t y = 0; y < questions; ++y)
        for (std::size_t b = 0; b < answers; ++b)
          p(x, y, a, b) = inner(av, bv[y * answers + b]).real();
    }
  return p;
}

}  // namespace syncert
