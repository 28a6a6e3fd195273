#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "emlab/lagrangian.hpp"
#include "test_util.hpp"

using namespace emlab;
using testutil::random_orthogonal;
using testutil::random_sample;

namespace {

double gradient_sweep(const Lagrangian& L, int samples, unsigned seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Matrix x = random_sample(rng, L.dim);
    const Matrix analytic = L.eval_DW(x);
    worst = std::max(worst,
                     frob(analytic - fd_gradient(L.eval_W, x)) / (1.0 + frob(analytic)));
  }
  return worst;
}

}  // namespace

TEST_CASE("dirichlet density") {
  const Lagrangian L2 = make_dirichlet(2.0, 2);
  CHECK(frob(L2.eval_DW(Matrix::identity(2)) - 2.0 * Matrix::identity(2)) < 1e-14);
  CHECK(L2.eval_W(Matrix::diag(1.0, 2.0)) == doctest::Approx(5.0));

  const Lagrangian L4 = make_dirichlet(4.0, 2);
  CHECK(frob(L4.eval_DW(Matrix::identity(2)) - 8.0 * Matrix::identity(2)) < 1e-13);

  CHECK_THROWS_AS(make_dirichlet(1.0, 2), BadParam);
  CHECK(gradient_sweep(L4, 50, 3) <= 1e-6);
}

TEST_CASE("quasiconformal-mean density") {
  const Lagrangian L = make_qmean(2, 1.0);
  CHECK(L.eval_W(Matrix::identity(2)) == doctest::Approx(2.0));
  CHECK(frob(L.eval_DW(Matrix::identity(2))) < 1e-14);
  CHECK(frob(L.eval_DW(Matrix::diag(1.0, -1.0))) < 1e-14);
  CHECK_THROWS_AS(L.eval_W(Matrix::diag(1.0, 0.0)), SingularMatrix);
  CHECK_THROWS_AS(make_qmean(2, 0.5), BadParam);
  CHECK(gradient_sweep(L, 50, 5) <= 1e-6);
  CHECK(gradient_sweep(make_qmean(2, 2.0), 50, 6) <= 1e-6);
  CHECK(gradient_sweep(make_qmean(3, 1.0), 50, 7) <= 1e-6);
}

TEST_CASE("inverse-power density") {
  const Lagrangian L = make_inv_power(2.0, 2);
  CHECK(L.eval_W(Matrix::identity(2)) == doctest::Approx(4.0));
  for (double alpha : {0.5, 1.0, 2.0})
    CHECK(L.eval_W(Matrix::diag(alpha, alpha)) == doctest::Approx(2.0 * alpha * alpha + 2.0));
  CHECK(frob(L.eval_DW(Matrix::identity(2)) -
             fd_gradient(L.eval_W, Matrix::identity(2))) < 1e-6);
  CHECK(gradient_sweep(L, 50, 9) <= 1e-6);
  CHECK(gradient_sweep(make_inv_power(3.0, 2), 50, 10) <= 1e-6);
}

TEST_CASE("norm-plus-adjugate density") {
  const Lagrangian L = make_ball(2.0, 2.0, 2);
  CHECK(L.eval_W(Matrix::identity(2)) == doctest::Approx(4.0));
  CHECK(frob(L.eval_DW(Matrix::identity(2)) - 4.0 * Matrix::identity(2)) < 1e-13);

  const Lagrangian L3 = make_ball(2.0, 2.0, 3);
  CHECK(frob(L3.eval_DW(Matrix::identity(3)) - 6.0 * Matrix::identity(3)) < 1e-12);

  CHECK_THROWS_AS(make_ball(0.5, 2.0, 2), BadParam);
  CHECK_THROWS_AS(make_ball(2.0, 1.5, 2), BadParam);
  CHECK(gradient_sweep(L, 50, 12) <= 1e-6);
  CHECK(gradient_sweep(L3, 50, 13) <= 1e-6);
}

TEST_CASE("quartic shell density") {
  const Lagrangian L = make_quartic_shell();
  CHECK(L.eval_W(Matrix::identity(2)) == doctest::Approx(4.0));
  CHECK(frob(L.eval_DW(Matrix::identity(2)) + 8.0 * Matrix::identity(2)) < 1e-13);
  CHECK(L.eval_W(Matrix::diag(2.0, 0.0)) == doctest::Approx(0.0));
  CHECK(frob(L.eval_DW(Matrix::diag(2.0, 0.0))) < 1e-13);
  CHECK(gradient_sweep(L, 50, 14) <= 1e-6);
}

TEST_CASE("two-invariant sigma hook") {
  // sigma(t, d) = t reduces to |X|^2
  const Lagrangian Lt = make_sigma_2d(
      "sigma_t", [](double t, double) { return t; }, [](double, double) { return 1.0; },
      [](double, double) { return 0.0; });
  std::mt19937_64 rng(15);
  const Matrix x = random_sample(rng, 2);
  CHECK(frob(Lt.eval_DW(x) - 2.0 * x) < 1e-13);

  const Lagrangian Ld = make_sigma_2d(
      "sigma_d", [](double, double d) { return d; }, [](double, double) { return 0.0; },
      [](double, double) { return 1.0; });
  CHECK(frob(Ld.eval_DW(Matrix::identity(2)) - 2.0 * Matrix::identity(2)) < 1e-13);
  CHECK(gradient_sweep(Ld, 50, 16) <= 1e-6);

  const Lagrangian Ltd = make_sigma_2d(
      "sigma_td", [](double t, double d) { return t + d; }, [](double, double) { return 1.0; },
      [](double, double) { return 1.0; });
  CHECK(frob(Ltd.eval_DW(Matrix::identity(2)) - 4.0 * Matrix::identity(2)) < 1e-13);
  CHECK(gradient_sweep(Ltd, 50, 17) <= 1e-6);
}

TEST_CASE("left and right orthogonal invariance of the densities") {
  std::mt19937_64 rng(18);
  const std::vector<Lagrangian> all{make_dirichlet(2.0, 2), make_qmean(2, 1.0),
                                    make_inv_power(2.0, 2), make_ball(2.0, 2.0, 2)};
  for (const Lagrangian& L : all)
    for (int s = 0; s < 20; ++s) {
      const Matrix x = random_sample(rng, L.dim);
      const Matrix r = random_orthogonal(rng, L.dim, s % 2 == 1);
      const double w = L.eval_W(x);
      CHECK(std::abs(L.eval_W(r * x) - w) <= 1e-12 * (1.0 + std::abs(w)));
      CHECK(std::abs(L.eval_W(x * r) - w) <= 1e-12 * (1.0 + std::abs(w)));
    }
}

TEST_CASE("id strings round-trip through the parser") {
  const Lagrangian L = make_ball(2.0, 3.0, 2);
  const Lagrangian back = lagrangian_from_id(L.id());
  CHECK(back.name == "ball");
  CHECK(back.params.at("p") == doctest::Approx(2.0));
  CHECK(back.params.at("q") == doctest::Approx(3.0));

  CHECK(lagrangian_from_id("dirichlet:p=2,n=2").name == "dirichlet");
  CHECK_THROWS_AS(lagrangian_from_id("unknown:p=2"), ConfigError);
  CHECK_THROWS_AS(lagrangian_from_id("dirichlet:p=zzz"), ConfigError);
  CHECK_THROWS_AS(lagrangian_from_id("dirichlet:p=0.5,n=2"), ConfigError);
}
