#include <doctest.h>

#include "support.hpp"
#include "syncert/numerics.hpp"
#include "syncert/random.hpp"

using namespace syncert;
using testing::max_abs_diff;

TEST_SUITE("numerics") {
  TEST_CASE("products and Kronecker products match naive loops") {
    Rng rng(11);
    const CMatrix a = random_ginibre(4, 3, rng), b = random_ginibre(3, 5, rng);
    CHECK(max_abs_diff(a * b, testing::naive_mul(a, b)) <= 1e-13);
    CHECK(max_abs_diff(tensor(a, b), testing::naive_kron(a, b)) <= 1e-15);
    const CVector v = random_unit_vector(3, rng);
    CHECK(max_abs_diff(a * v, testing::naive_apply(a, v)) <= 1e-14);
    CHECK(std::abs(inner(v, v) - 1.0) <= 1e-14);
  }

  TEST_CASE("vec identity for row stacking: vec(ABC) = (A (x) C^T) vec(B)") {
    Rng rng(12);
    const std::size_t d = 3;
    const CMatrix a = random_ginibre(d, d, rng), b = random_ginibre(d, d, rng),
                  c = random_ginibre(d, d, rng);
    const CVector lhs = vec(a * b * c);
    const CVector rhs = testing::naive_apply(testing::naive_kron(a, c.transpose()), vec(b));
    CHECK(max_abs_diff(lhs, rhs) <= 1e-12);
    CHECK(max_abs_diff(mat(vec(b)), b) == 0.0);
    CHECK_THROWS_AS(vec(random_ginibre(2, 3, rng)), DimensionError);
  }

  TEST_CASE("eigh agrees with the characteristic polynomial oracle") {
    Rng rng(13);
    for (std::size_t n : {1u, 2u, 3u, 5u, 6u}) {
      const CMatrix h = random_hermitian(n, rng);
      const auto es = eigh(h);
      REQUIRE(es.values.size() == n);
      const auto poly = testing::characteristic_polynomial(h);
      double scale = 1.0;
      for (double v : es.values) scale = std::max(scale, std::abs(v));
      for (double lambda : es.values)
        CHECK(std::abs(testing::eval_poly(poly, lambda)) <= 1e-9 * std::pow(scale, n));
      // Sum and product of the eigenvalues against trace and determinant.
      double sum = 0.0, prod = 1.0;
      for (double v : es.values) {
        sum += v;
        prod *= v;
      }
      CHECK(std::abs(sum - h.trace().real()) <= 1e-10 * scale * n);
      const double det = std::real(poly[n]) * (n % 2 == 0 ? 1.0 : -1.0);
      CHECK(std::abs(prod - det) <= 1e-9 * std::pow(scale, n));
      for (std::size_t i = 1; i < n; ++i) CHECK(es.values[i - 1] >= es.values[i]);
      for (std::size_t i = 0; i < n; ++i) {
        const CVector hv = h * es.vectors[i];
        CHECK(max_abs_diff(hv, es.values[i] * es.vectors[i]) <= 1e-10 * scale);
        for (std::size_t j = 0; j < n; ++j)
          CHECK(std::abs(inner(es.vectors[i], es.vectors[j]) - (i == j ? 1.0 : 0.0)) <= 1e-12);
      }
    }
    CHECK_THROWS_AS(eigh(CMatrix{{0, 1}, {0, 0}}), std::invalid_argument);
  }

  TEST_CASE("svd, polar factor and psd square root") {
    Rng rng(14);
    const CMatrix m = random_ginibre(5, 3, rng);
    const auto s = svd(m);
    CMatrix recon(5, 3);
    for (std::size_t k = 0; k < 3; ++k)
      for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 3; ++j) recon(i, j) += s.u(i, k) * s.values[k] * std::conj(s.v(j, k));
    CHECK(max_abs_diff(recon, m) <= 1e-12);
    CHECK(std::abs(operator_norm(m) - s.values[0]) <= 1e-12);

    const CMatrix w = polar_factor(m);
    CHECK(max_abs_diff(w.adjoint() * w, CMatrix::identity(3)) <= 1e-12);

    const CMatrix p = m.adjoint() * m;
    const CMatrix r = psd_sqrt(p);
    CHECK(max_abs_diff(r * r, p) <= 1e-11);
  }

  TEST_CASE("partial trace, Schmidt decomposition and regrouping") {
    Rng rng(15);
    const CVector psi = random_unit_vector(6, rng);
    const CMatrix rho = outer(psi, psi);
    const CMatrix ra = partial_trace(rho, 2, 3, Side::A);
    const CMatrix rb = partial_trace(rho, 2, 3, Side::B);
    const CMatrix psimat = mat(psi, 2, 3);
    CHECK(max_abs_diff(ra, psimat * psimat.adjoint()) <= 1e-14);
    CHECK(max_abs_diff(rb, (psimat.adjoint() * psimat).transpose()) <= 1e-14);

    const auto sd = schmidt(psi, 2, 3);
    CVector recon(6);
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
      recon += sd.coefficients[k] * tensor(sd.left[k], sd.right[k]);
    CHECK(max_abs_diff(recon, psi) <= 1e-13);
    CHECK(sd.rank() == 2);
    CHECK(schmidt(tensor(CVector{1, 0}, CVector{0, 1, 0}), 2, 3).rank() == 1);

    const CVector v = random_unit_vector(2 * 3 * 2 * 2, rng);
    const CVector g = regroup_to_ideal_junk(v, 2, 3, 2, 2);
    CHECK(max_abs_diff(regroup_to_parties(g, 2, 3, 2, 2), v) == 0.0);
    // Product vectors map to the expected product layout.
    const CVector ka = random_unit_vector(2, rng), ja = random_unit_vector(3, rng);
    const CVector kb = random_unit_vector(2, rng), jb = random_unit_vector(2, rng);
    const CVector parties = tensor(tensor(ka, ja), tensor(kb, jb));
    const CVector grouped = tensor(tensor(ka, kb), tensor(ja, jb));
    CHECK(max_abs_diff(regroup_to_ideal_junk(parties, 2, 3, 2, 2), grouped) <= 1e-15);
  }

  TEST_CASE("density matrices and the rho seminorm") {
    CHECK_THROWS_AS(DensityMatrix(CMatrix{{0.5, 0}, {0, 0.4}}), std::invalid_argument);
    CHECK_THROWS_AS(DensityMatrix(CMatrix{{1.1, 0}, {0, -0.1}}), std::invalid_argument);
    const auto mm = DensityMatrix::maximally_mixed(4);
    Rng rng(16);
    const CMatrix x = random_ginibre(4, 4, rng);
    CHECK(std::abs(rho_seminorm(x, mm) - x.frobenius_norm() / 2.0) <= 1e-13);
    const CVector e0 = CVector::basis(4, 0);
    const auto pure = DensityMatrix::from_pure(e0);
    CHECK(std::abs(rho_seminorm(x, pure) - (x * e0).norm()) <= 1e-13);
    CHECK(std::abs(random_density(4, 2, rng).trace() - 1.0) <= 1e-13);
  }

  TEST_CASE("random generators are seeded and unitary") {
    Rng a(5), b(5);
    const CMatrix u = haar_unitary(5, a);
    CHECK(max_abs_diff(u, haar_unitary(5, b)) == 0.0);
    CHECK(max_abs_diff(u.adjoint() * u, CMatrix::identity(5)) <= 1e-13);
    const CMatrix v = random_isometry(5, 2, a);
    CHECK(max_abs_diff(v.adjoint() * v, CMatrix::identity(2)) <= 1e-13);
  }
}
