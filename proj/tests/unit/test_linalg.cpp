#include <doctest.h>

#include <cmath>
#include <limits>

#include "gpn/exact_exponential.hpp"
#include "gpn/kernels.hpp"
#include "gpn/linalg.hpp"
#include "test_helpers.hpp"

using namespace gpn;
using gpn_test::Lcg;

TEST_CASE("cholesky of the identity is the identity") {
  const CholFactor f = cholesky(SymMatrix::identity(3));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j <= i; ++j)
      CHECK(f.lower(i, j) == (i == j ? 1.0 : 0.0));
}

TEST_CASE("2x2 analytic factor") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 1.0);
  m.set(0, 1, 0.5);
  const CholFactor f = cholesky(m);
  CHECK(f.lower(0, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.lower(1, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(f.lower(1, 1) == doctest::Approx(std::sqrt(0.75)).epsilon(1e-15));
}

TEST_CASE("gaussian kernel at large psi is not factorable in double precision") {
  const KernelSpec k{KernelFamily::gaussian, 100.0, 0.0};
  const SymMatrix r = corr_matrix(k, equidistant_points(20));
  CHECK_THROWS_AS(cholesky(r), NotPositiveDefinite);
  // eigenvalue-scan oracle: the smallest eigenvalue sits below the pivot floor
  const std::vector<double> eig = jacobi_eigenvalues(r);
  CHECK(eig.front() < 1e-14 * r.max_diagonal());
}

TEST_CASE("quad_form identity and 2x2 analytic values") {
  {
    const CholFactor f = cholesky(SymMatrix::identity(3));
    const std::vector<double> v{1.0, 2.0, 3.0};
    CHECK(quad_form(f, v) == doctest::Approx(14.0).epsilon(1e-15));
  }
  {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, 1.0);
    m.set(0, 1, 0.5);
    const CholFactor f = cholesky(m);
    const std::vector<double> v{1.0, 1.0};
    // (2 - 2 lambda) / (1 - lambda^2) at lambda = 0.5
    CHECK(quad_form(f, v) == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("quad_form matches the explicit-inverse oracle") {
  Lcg rng(20240517);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = trial < 10 ? 5 : rng.uniform_int(2, 30);
    const SymMatrix m = gpn_test::random_spd(rng, n);
    const CholFactor f = cholesky(m);
    std::vector<double> v(n);
    for (double& e : v) e = rng.uniform(-2.0, 2.0);

    const auto inv = gpn_test::dense_inverse(m);
    double expected = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) expected += v[i] * inv[i][j] * v[j];

    CHECK(quad_form(f, v) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("quad_form rejects mismatched dimensions") {
  const CholFactor f = cholesky(SymMatrix::identity(3));
  const std::vector<double> v{1.0, 2.0};
  CHECK_THROWS_AS(quad_form(f, v), DimensionMismatch);
}

TEST_CASE("log_det: identity, 2x2, and the equidistant closed form") {
  CHECK(log_det(cholesky(SymMatrix::identity(7))) == doctest::Approx(0.0));
  {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, 1.0);
    m.set(0, 1, 0.5);
    CHECK(log_det(cholesky(m)) ==
          doctest::Approx(std::log(0.75)).epsilon(1e-14));
  }
  {
    // exponential kernel on the equidistant grid: |R| = (1 - lambda^2)^(n-1)
    const int n = 10;
    const double psi = 0.7;
    const KernelSpec k{KernelFamily::exponential, psi, 0.0};
    const SymMatrix r = corr_matrix(k, equidistant_points(n));
    const double lambda = std::exp(-1.0 / ((n - 1) * psi));
    CHECK(log_det(cholesky(r)) ==
          doctest::Approx((n - 1) * std::log1p(-lambda * lambda)).epsilon(1e-12));
  }
}

TEST_CASE("factor reconstruction error stays at roundoff") {
  Lcg rng(7);
  for (const int n : {2, 5, 12, 30}) {
    const SymMatrix m = gpn_test::random_spd(rng, n);
    const CholFactor f = cholesky(m);
    double max_m = 0.0, max_err = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double rec = 0.0;
        for (int k = 0; k <= std::min(i, j); ++k)
          rec += f.lower(i, k) * f.lower(j, k);
        max_err = std::max(max_err, std::fabs(rec - m(i, j)));
        max_m = std::max(max_m, std::fabs(m(i, j)));
      }
    }
    CHECK(max_err <= 1e-12 * n * max_m);
  }
}

TEST_CASE("jacobi eigenvalues of a 2x2 correlation matrix are 1 +- rho") {
  for (const double rho : {0.1, 0.5, 0.9, 0.99}) {
    SymMatrix m(2);
    m.set(0, 0, 1.0);
    m.set(1, 1, 1.0);
    m.set(0, 1, rho);
    const std::vector<double> eig = jacobi_eigenvalues(m);
    CHECK(eig[0] == doctest::Approx(1.0 - rho).epsilon(1e-12));
    CHECK(eig[1] == doctest::Approx(1.0 + rho).epsilon(1e-12));
  }
}

TEST_CASE("condition number: identity, 2x2, scale invariance, flags") {
  CHECK(condition_number(SymMatrix::identity(4)).value == doctest::Approx(1.0));

  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 1.0);
  m.set(0, 1, 0.5);
  const ConditionNumber c = condition_number(m);
  CHECK(c.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_FALSE(c.beyond_double_precision);

  Lcg rng(99);
  SymMatrix a = gpn_test::random_spd(rng, 8);
  const double base = condition_number(a).value;
  a.scale(37.5);
  CHECK(condition_number(a).value == doctest::Approx(base).epsilon(1e-10));

  // the fitted gaussian-kernel matrix regime the diagnostics care about
  const KernelSpec k{KernelFamily::gaussian, 0.2822, 0.0};
  const ConditionNumber sin8 = condition_number(corr_matrix(k, equidistant_points(8)));
  CHECK(sin8.value > 1e6);
  CHECK(sin8.value < 1e8);
  CHECK_FALSE(sin8.beyond_double_precision);

  const KernelSpec wide{KernelFamily::gaussian, 3.0, 0.0};
  const ConditionNumber flagged =
      condition_number(corr_matrix(wide, equidistant_points(8)));
  CHECK(flagged.beyond_double_precision);
}

TEST_CASE("condition number +inf sentinel for an effectively singular matrix") {
  SymMatrix m(2);
  m.set(0, 0, 1.0);
  m.set(1, 1, 1e-300);
  const ConditionNumber c = condition_number(m);
  CHECK(std::isinf(c.value));
  CHECK(c.beyond_double_precision);
}

TEST_CASE("estimate_condition tracks the Jacobi value") {
  Lcg rng(1234);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = rng.uniform_int(3, 20);
    const SymMatrix m = gpn_test::random_spd(rng, n);
    const CholFactor f = cholesky(m);
    const double est = estimate_condition(m, f);
    const double exact = condition_number(m).value;
    CHECK(est == doctest::Approx(exact).epsilon(0.05));
  }
}
