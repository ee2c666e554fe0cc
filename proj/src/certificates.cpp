#include "syncert/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <tuple>

namespace syncert {

namespace {

// (A (x) B) psi for psi on rA*rB, as the rA' x rB' coefficient matrix A Psi B^T.
CMatrix apply_local(const CMatrix& a, const CMatrix& b, const CMatrix& psi) {
  return a * psi * b.transpose();
}

CVector as_vector(const CMatrix& m) {
  return CVector(std::vector<cplx>(m.entries().begin(), m.entries().end()));
}

CMatrix top_projector(const EigenSystem& es, double tol) {
  const std::size_t n = es.values.size();
  CMatrix p(n, n);
  for (std::size_t i = 0; i < n && es.values[i] >= es.values.front() - tol; ++i)
    p += outer(es.vectors[i], es.vectors[i]);
  return p;
}

std::vector<CMatrix> flatten(const std::vector<std::vector<CMatrix>>& f) {
  std::vector<CMatrix> out;
  for (const auto& q : f) out.insert(out.end(), q.begin(), q.end());
  return out;
}

std::vector<std::vector<CMatrix>> effects_of(const std::vector<Povm>& family) {
  std::vector<std::vector<CMatrix>> out;
  for (const auto& p : family) out.push_back(p.effects());
  return out;
}

void require_matching_game(const TensorStrategy& s, const PmeStrategy& ideal) {
  if (s.questions_a() != ideal.questions() || s.questions_b() != ideal.questions() ||
      s.answers_a() != ideal.answers() || s.answers_b() != ideal.answers())
    throw DimensionError("strategy and ideal strategy have different question/answer counts");
}

CMatrix word_product(const std::vector<Povm>& family, const Word& w, std::size_t dim) {
  CMatrix out = CMatrix::identity(dim);
  for (const auto& l : w) {
    if (l.x >= family.size() || l.a >= family[l.x].outcomes())
      throw std::out_of_range("unknown letter e(" + std::to_string(l.x) + "," +
                              std::to_string(l.a) + ")");
    out = out * family[l.x][l.a];
  }
  return out;
}

CMatrix ideal_word(const PmeStrategy& ideal, const Word& w, bool transposed) {
  CMatrix out = CMatrix::identity(ideal.dim());
  for (const auto& l : w) {
    if (l.x >= ideal.questions() || l.a >= ideal.answers())
      throw std::out_of_range("unknown letter e(" + std::to_string(l.x) + "," +
                              std::to_string(l.a) + ")");
    const CMatrix& p = ideal.projection(l.x, l.a);
    out = out * (transposed ? p.transpose() : p);
  }
  return out;
}

// sum_k ||E_k - V^* G_k V||_rho^2.
double seminorm_objective(const std::vector<CMatrix>& effects, const std::vector<CMatrix>& targets,
                          const CMatrix& v, const DensityMatrix& rho) {
  double total = 0.0;
  for (std::size_t k = 0; k < effects.size(); ++k) {
    const double r = rho_seminorm(effects[k] - v.adjoint() * targets[k] * v, rho);
    total += r * r;
  }
  return total;
}

struct PartyFit {
  CMatrix v;
  double objective = std::numeric_limits<double>::infinity();
  std::size_t iterations = 0;
};

// Maximizes sum_k Re Tr(G_k V K_k V^*) with K_k = (rho E_k + E_k rho)/2 over
// isometries (or co-isometries) by V <- polar(sum_k G_k V K_k + c V). The
// shift c makes the quadratic form positive, so each step cannot decrease it.
PartyFit fit_party(const std::vector<CMatrix>& effects, const std::vector<CMatrix>& targets,
                   const DensityMatrix& rho, std::size_t junk, const NumericDilationOptions& opts,
                   Rng& rng) {
  const std::size_t r = rho.dim();
  const std::size_t big = targets.front().rows() * junk;
  const CMatrix id_junk = CMatrix::identity(junk);

  std::vector<CMatrix> g, k;
  double shift = 0.0;
  for (std::size_t i = 0; i < effects.size(); ++i) {
    g.push_back(tensor(targets[i], id_junk));
    const CMatrix re = rho.matrix() * effects[i];
    CMatrix ki = 0.5 * (re + re.adjoint());
    const auto es = eigh(ki);
    shift += std::max(0.0, -es.values.back());
    k.push_back(std::move(ki));
  }

  PartyFit best;
  for (std::size_t attempt = 0; attempt < std::max<std::size_t>(1, opts.restarts); ++attempt) {
    CMatrix v(big, r);
    if (attempt == 0) {
      for (std::size_t i = 0; i < std::min(big, r); ++i) v(i, i) = 1.0;
    } else {
      v = big >= r ? random_isometry(big, r, rng) : random_isometry(r, big, rng).adjoint();
    }
    double prev = seminorm_objective(effects, g, v, rho);
    PartyFit run{v, prev, 0};
    for (std::size_t it = 0; it < opts.iters; ++it) {
      CMatrix m = shift * v;
      for (std::size_t i = 0; i < g.size(); ++i) m += g[i] * v * k[i];
      v = polar_factor(m);
      const double obj = seminorm_objective(effects, g, v, rho);
      run.iterations = it + 1;
      if (obj < run.objective) {
        run.objective = obj;
        run.v = v;
      }
      if (std::abs(prev - obj) <= 1e-12 * std::max(std::abs(prev), 1e-300)) break;
      prev = obj;
    }
    if (run.objective < best.objective) best = std::move(run);
  }
  return best;
}

CVector mapped_state(const TensorStrategy& s, const Dilation& dil, std::size_t d) {
  const CMatrix psi = mat(s.state(), s.dim_a(), s.dim_b());
  return regroup_to_ideal_junk(as_vector(apply_local(dil.iso_a, dil.iso_b, psi)), d, dil.junk_a,
                               d, dil.junk_b);
}

}  // namespace

CMatrix sync_operator(const PmeStrategy& s) {
  const std::size_t d = s.dim();
  CMatrix m(d * d, d * d);
  for (const auto& q : s.projections())
    for (const auto& p : q) m += tensor(p, p.transpose());
  return m;
}

SpectralCertificate spectral_certificate(const PmeStrategy& s) {
  SpectralCertificate c;
  c.m = s.questions();
  c.dim = s.dim();
  const auto es = eigh(sync_operator(s));
  c.top_eigenvalue = es.values.front();
  c.top_multiplicity = static_cast<std::size_t>(
      std::count_if(es.values.begin(), es.values.end(), [&](double v) {
        return v >= c.top_eigenvalue - SpectralCertificate::kTolerance;
      }));
  c.degenerate = es.values.size() < 2;
  c.lambda2 = c.degenerate ? 0.0 : es.values[1];
  c.overlap_with_me_state = std::norm(inner(maximally_entangled(s.dim()), es.vectors.front()));
  c.irreducible = is_irreducible(OperatorFamily::from_pme(s));
  c.certified = c.irreducible && c.top_multiplicity == 1 &&
                std::abs(c.top_eigenvalue - static_cast<double>(c.m)) <=
                    SpectralCertificate::kTolerance &&
                c.overlap_with_me_state >= 1.0 - SpectralCertificate::kTolerance;
  return c;
}

// ------------------------------------------------------ robustness constants

double robustness_beta(std::size_t m, std::size_t n, double gap, double eps_prime) {
  const double k = 2.0 * static_cast<double>(m) * static_cast<double>(n) + 1.0;
  return std::sqrt(2.0 * k * eps_prime / gap);
}

double robustness_dilation_error(double eps_prime, double beta) {
  return 2.0 * eps_prime + beta + std::sqrt(5.0 * eps_prime + 2.0 * beta);
}

double RobustnessConstants::dilation_error() const noexcept {
  return robustness_dilation_error(eps_prime, beta);
}

RobustnessConstants robustness_constants(std::size_t m, double gap, std::size_t n, double eps) {
  if (!(gap > 0.0)) throw std::invalid_argument("robustness_constants: spectral gap must be positive");
  if (!(eps > 0.0)) throw std::invalid_argument("robustness_constants: eps must be positive");

  RobustnessConstants rc;
  rc.m = m;
  rc.n = n;
  rc.gap = gap;
  rc.eps = eps;
  const double cap = gap / (2.0 * static_cast<double>(m) * static_cast<double>(n) + 1.0);
  auto feasible = [&](double e) {
    return robustness_dilation_error(e, robustness_beta(m, n, gap, e)) <= eps;
  };

  // The constraint function is increasing in eps', so a fixed number of
  // halvings keeps the answer monotone in eps.
  double lo = 0.0, hi = cap;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (feasible(mid) ? lo : hi) = mid;
  }
  rc.eps_prime = lo;
  rc.capped = !(hi < cap);  // never hit an infeasible midpoint: eps' < cap binds
  rc.beta = robustness_beta(m, n, gap, rc.eps_prime);
  rc.delta_constructive = rc.eps_prime;
  rc.feasible = rc.eps_prime > 0.0;
  return rc;
}

RobustnessConstants robustness_constants(const SpectralCertificate& cert, std::size_t n,
                                         double eps) {
  return robustness_constants(cert.m, cert.gap(), n, eps);
}

// ---------------------------------------------------------------- junk state

JunkState extract_junk(const PmeStrategy& ideal, const CVector& mapped) {
  const std::size_t d = ideal.dim();
  const std::size_t n2 = d * d;
  if (mapped.size() == 0 || mapped.size() % n2 != 0)
    throw DimensionError("extract_junk: state length " + std::to_string(mapped.size()) +
                         " is not a multiple of " + std::to_string(n2));
  const std::size_t s = mapped.size() / n2;

  const CMatrix q = top_projector(eigh(sync_operator(ideal)), SpectralCertificate::kTolerance);
  const CMatrix qphi = q * mat(mapped, n2, s);

  JunkState j;
  j.alpha = qphi.frobenius_norm();
  if (j.alpha <= 1e-12)
    throw std::invalid_argument("extract_junk: state is orthogonal to the top eigenspace");

  const CVector me = maximally_entangled(d);
  CVector c(s);
  for (std::size_t col = 0; col < s; ++col)
    for (std::size_t i = 0; i < n2; ++i) c[col] += std::conj(me[i]) * qphi(i, col);
  const double cn = c.norm();
  if (cn <= 1e-12)
    throw std::invalid_argument("extract_junk: projected state has no component along psi~");
  j.aux = (1.0 / cn) * c;

  double r2 = 0.0;
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t col = 0; col < s; ++col)
      r2 += std::norm(qphi(i, col) - j.alpha * me[i] * j.aux[col]);
  j.residual = std::sqrt(r2);
  return j;
}

// ---------------------------------------------------------------- dilations

double Dilation::isometry_defect() const {
  const double da = (iso_a.adjoint() * iso_a - CMatrix::identity(iso_a.cols())).frobenius_norm();
  const double db = (iso_b.adjoint() * iso_b - CMatrix::identity(iso_b.cols())).frobenius_norm();
  return std::max(da, db);
}

DilationResiduals verify_dilation(const TensorStrategy& s, const PmeStrategy& ideal,
                                  const Dilation& dil) {
  require_matching_game(s, ideal);
  const std::size_t d = ideal.dim();
  const std::size_t sa = dil.junk_a, sb = dil.junk_b;
  if (dil.iso_a.cols() != s.dim_a() || dil.iso_a.rows() != d * sa ||
      dil.iso_b.cols() != s.dim_b() || dil.iso_b.rows() != d * sb || dil.aux.size() != sa * sb)
    throw DimensionError("verify_dilation: isometry or junk dimensions do not match");

  const CMatrix psi = mat(s.state(), s.dim_a(), s.dim_b());
  const CVector me = maximally_entangled(d);
  DilationResiduals r;
  {
    const CVector mapped = mapped_state(s, dil, d);
    r.state_residual = (mapped - tensor(me, dil.aux)).norm();
  }

  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  std::vector<CMatrix> right;  // V_B F_{y,b}, indexed y*n + b
  for (std::size_t y = 0; y < s.questions_b(); ++y)
    for (std::size_t b = 0; b < s.answers_b(); ++b) right.push_back(dil.iso_b * s.bob(y)[b]);

  for (std::size_t x = 0; x < s.questions_a(); ++x)
    for (std::size_t a = 0; a < s.answers_a(); ++a) {
      const CMatrix left = dil.iso_a * s.alice(x)[a] * psi;
      for (std::size_t y = 0; y < s.questions_b(); ++y)
        for (std::size_t b = 0; b < s.answers_b(); ++b) {
          const CVector got = regroup_to_ideal_junk(
              as_vector(left * right[y * s.answers_b() + b].transpose()), d, sa, d, sb);
          // (E~ (x) E~^T) vec(I/sqrt d) = vec(E~_{x,a} E~_{y,b}) / sqrt d.
          const CMatrix ideal_ab = ideal.projection(x, a) * ideal.projection(y, b);
          double r2 = 0.0;
          for (std::size_t k = 0; k < d; ++k)
            for (std::size_t l = 0; l < d; ++l) {
              const cplx coef = ideal_ab(k, l) * inv_sqrt_d;
              const std::size_t base = (k * d + l) * sa * sb;
              for (std::size_t j = 0; j < sa * sb; ++j)
                r2 += std::norm(got[base + j] - coef * dil.aux[j]);
            }
          r.max_measurement_residual = std::max(r.max_measurement_residual, std::sqrt(r2));
        }
    }
  return r;
}

Dilation find_dilation_exact(const TensorStrategy& s, const PmeStrategy& ideal, Rng& rng) {
  require_matching_game(s, ideal);
  const std::size_t d = ideal.dim();

  auto party = [&](const std::vector<Povm>& family, const std::vector<CMatrix>& targets,
                   const char* who) -> std::pair<CMatrix, std::size_t> {
    const auto f = OperatorFamily::from_indexed(effects_of(family));
    const BlockDecomposition bd = block_diagonalize(f, rng);
    if (bd.blocks.size() != 1 || bd.blocks.front().dim != d)
      throw std::invalid_argument(std::string("find_dilation_exact: ") + who +
                                  "'s effects do not form copies of a single " +
                                  std::to_string(d) + "-dimensional irreducible block (" +
                                  std::to_string(bd.blocks.size()) + " inequivalent blocks)");
    const CMatrix t = intertwiner(bd.images.front(), targets);
    if (t.rows() == 0)
      throw std::invalid_argument(std::string("find_dilation_exact: ") + who +
                                  "'s irreducible block is not equivalent to the ideal projections");
    const std::size_t junk = bd.blocks.front().multiplicity;
    return {tensor(t, CMatrix::identity(junk)) * bd.unitary, junk};
  };

  const auto targets_a = flatten(ideal.projections());
  const auto targets_b = flatten(transposed_family(ideal.projections()));
  Dilation dil;
  std::tie(dil.iso_a, dil.junk_a) = party(s.alice(), targets_a, "Alice");
  std::tie(dil.iso_b, dil.junk_b) = party(s.bob(), targets_b, "Bob");
  dil.aux = extract_junk(ideal, mapped_state(s, dil, d)).aux;
  return dil;
}

Dilation find_dilation_exact(const TensorStrategy& s, const PmeStrategy& ideal) {
  Rng rng(kDefaultSeed);
  return find_dilation_exact(s, ideal, rng);
}

NumericDilation find_dilation_numeric(const TensorStrategy& s, const PmeStrategy& ideal,
                                      const NumericDilationOptions& opts) {
  require_matching_game(s, ideal);
  const std::size_t d = ideal.dim();
  const std::size_t sa = opts.junk_a.value_or((s.dim_a() + d - 1) / d);
  const std::size_t sb = opts.junk_b.value_or((s.dim_b() + d - 1) / d);
  if (sa == 0 || sb == 0) throw std::invalid_argument("junk dimensions must be positive");

  Rng rng(opts.seed);
  const ReducedStates rs = reduced_states(s);
  const PartyFit fa = fit_party(flatten(effects_of(s.alice())), flatten(ideal.projections()),
                                rs.rho_a, sa, opts, rng);
  const PartyFit fb =
      fit_party(flatten(effects_of(s.bob())), flatten(transposed_family(ideal.projections())),
                rs.rho_b, sb, opts, rng);

  NumericDilation out;
  out.dilation.iso_a = fa.v;
  out.dilation.iso_b = fb.v;
  out.dilation.junk_a = sa;
  out.dilation.junk_b = sb;
  out.objective = fa.objective + fb.objective;
  out.iterations = std::max(fa.iterations, fb.iterations);
  out.co_isometry = d * sa < s.dim_a() || d * sb < s.dim_b();
  try {
    out.dilation.aux = extract_junk(ideal, mapped_state(s, out.dilation, d)).aux;
  } catch (const std::invalid_argument&) {
    out.dilation.aux = CVector::basis(sa * sb, 0);
  }
  out.residuals = verify_dilation(s, ideal, out.dilation);
  return out;
}

// ----------------------------------------------------------- moment bound

MomentGap moment_gap(const TensorStrategy& s, const PmeStrategy& ideal, const Word& word_a,
                     const Word& word_b, double eps) {
  const CMatrix ea = word_product(s.alice(), word_a, s.dim_a());
  const CMatrix fb = word_product(s.bob(), word_b, s.dim_b());
  const CMatrix psi = mat(s.state(), s.dim_a(), s.dim_b());
  // <psi|A (x) B|psi> = Tr(Psi^* A Psi B^T).
  const cplx real_value = (psi.adjoint() * ea * psi * fb.transpose()).trace();

  const CMatrix ta = ideal_word(ideal, word_a, false);
  const CMatrix tb = ideal_word(ideal, word_b, true);
  const cplx ideal_value = (ta * tb.transpose()).trace() / static_cast<double>(ideal.dim());

  MomentGap g;
  g.eps = eps;
  g.gap = std::abs(ideal_value - real_value);
  const double n = static_cast<double>(ideal.answers());
  const double len = static_cast<double>(word_a.size() + word_b.size());
  g.bound = ((n + 5.0) * len + 2.0) * eps;
  g.holds = g.gap <= g.bound + 1e-9;
  return g;
}

MomentGap moment_gap(const TensorStrategy& s, const PmeStrategy& ideal, const Dilation& dil,
                     const Word& word_a, const Word& word_b) {
  return moment_gap(s, ideal, word_a, word_b, verify_dilation(s, ideal, dil).worst());
}

// ------------------------------------------------- auxiliary inequalities

OverlapBound eigengap_overlap_bound(const CMatrix& a, const CVector& xi, double eps) {
  if (!a.is_square() || a.rows() != xi.size())
    throw DimensionError("eigengap_overlap_bound: operator and vector sizes differ");
  const auto es = eigh(a);
  const double lambda1 = es.values.front();
  const double tol = 1e-10 * std::max(1.0, std::abs(lambda1));
  std::size_t top = 0;
  while (top < es.values.size() && es.values[top] >= lambda1 - tol) ++top;
  if (top == es.values.size())
    throw std::invalid_argument("eigengap_overlap_bound: operator has a single eigenvalue");
  const double lambda2 = es.values[top];

  OverlapBound b;
  for (std::size_t i = 0; i < top; ++i) b.actual += std::norm(inner(es.vectors[i], xi));
  b.lower_bound = 1.0 - eps / (lambda1 - lambda2);
  b.precondition = inner(xi, a * xi).real() >= lambda1 - eps - 1e-12;
  b.holds = b.actual >= b.lower_bound - 1e-10;
  return b;
}

TensorPerturbation tensor_perturbation_bound(const CMatrix& x1, const CMatrix& x2,
                                             const CMatrix& y1, const CMatrix& y2,
                                             const CVector& psi) {
  const std::size_t da = x1.rows(), db = y1.rows();
  if (x2.rows() != da || y2.rows() != db || !x1.is_square() || !x2.is_square() ||
      !y1.is_square() || !y2.is_square() || psi.size() != da * db)
    throw DimensionError("tensor_perturbation_bound: incompatible dimensions");

  const CMatrix full = tensor(x1, y1) - tensor(x2, y2);
  const CVector moved = full * psi;
  TensorPerturbation t;
  t.expectation_gap = std::abs(inner(psi, moved));
  t.vector_gap = moved.norm();

  const DensityMatrix rho(outer(psi, psi), 1e-9);
  const DensityMatrix rho_a(partial_trace(rho.matrix(), da, db, Side::A), 1e-9);
  const DensityMatrix rho_b(partial_trace(rho.matrix(), da, db, Side::B), 1e-9);
  const double dx = rho_seminorm(x1 - x2, rho_a);
  const double dy = rho_seminorm(y1 - y2, rho_b);
  t.expectation_bound =
      dx * rho_seminorm(y2.adjoint(), rho_b) + dy * rho_seminorm(x1.adjoint(), rho_a);
  t.vector_bound = dx * operator_norm(y2) + dy * operator_norm(x1);
  t.holds = t.expectation_gap <= t.expectation_bound + 1e-9 &&
            t.vector_gap <= t.vector_bound + 1e-9;
  return t;
}

ProjectionCloseness projection_closeness_bound(const CVector& xi, const CVector& eta,
                                               const CMatrix& p, double eps1, double eps2) {
  if (xi.size() != eta.size() || !p.is_square() || p.rows() != xi.size())
    throw DimensionError("projection_closeness_bound: incompatible dimensions");
  ProjectionCloseness c;
  const double nx = xi.norm(), ne = eta.norm();
  c.distance = (xi - eta).norm();
  c.bound = eps2 + std::sqrt(std::max(0.0, eps1 + (nx + ne) * eps2));

  const double idem = operator_norm(p * p - p);
  const double herm = operator_norm(p - p.adjoint());
  const double norm_gap = std::abs(nx * nx - ne * ne);
  const double proj_gap = (xi - p * eta).norm();
  c.precondition = true;
  if (idem > 1e-10 || herm > 1e-10) {
    c.precondition = false;
    c.diagnostic = "P is not an orthogonal projection";
  } else if (norm_gap > eps1 + 1e-12) {
    c.precondition = false;
    c.diagnostic = "| ||xi||^2 - ||eta||^2 | = " + std::to_string(norm_gap) + " exceeds eps1";
  } else if (proj_gap > eps2 + 1e-12) {
    c.precondition = false;
    c.diagnostic = "||xi - P eta|| = " + std::to_string(proj_gap) + " exceeds eps2";
  }
  c.holds = c.distance <= c.bound + 1e-9;
  return c;
}

TensorStrategy depolarize(const TensorStrategy& s, double eta) {
  auto mix = [eta](const std::vector<Povm>& family) {
    std::vector<Povm> out;
    for (const auto& povm : family) {
      const std::size_t n = povm.outcomes();
      const CMatrix noise = (eta / static_cast<double>(n)) * CMatrix::identity(povm.dim());
      std::vector<CMatrix> effects;
      for (const auto& e : povm.effects()) effects.push_back((1.0 - eta) * e + noise);
      out.emplace_back(std::move(effects));
    }
    return out;
  };
  return TensorStrategy(mix(s.alice()), mix(s.bob()), s.state());
}

}  // namespace syncert
