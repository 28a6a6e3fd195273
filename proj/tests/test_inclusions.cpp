#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "emlab/emtensor.hpp"
#include "emlab/inclusions.hpp"
#include "emlab/staircase.hpp"
#include "test_util.hpp"

using namespace emlab;

TEST_CASE("rank-one reflections") {
  CHECK(frob(rank_one_reflection({0.0, 1.0}) - Matrix::diag(1.0, -1.0)) < 1e-14);
  CHECK(frob(rank_one_reflection({1.0, 0.0}) - Matrix::diag(-1.0, 1.0)) < 1e-14);
  const double r2 = 1.0 / std::sqrt(2.0);
  const Matrix r = rank_one_reflection({r2, r2});
  CHECK(frob(r - Matrix::from_rows2(0.0, -1.0, -1.0, 0.0)) < 1e-14);
  CHECK(frob(transpose(r) * r - Matrix::identity(2)) < 1e-14);
  CHECK(det(r) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(rank_one_reflection({1.0, 1.0}), NotUnit);
}

TEST_CASE("finding rank-one connections") {
  const auto conn = find_rank_one_connection(Matrix::identity(2), Matrix::diag(1.0, -1.0));
  REQUIRE(conn.has_value());
  CHECK(conn->xi[0] == doctest::Approx(0.0));
  CHECK(conn->xi[1] == doctest::Approx(1.0));
  CHECK(conn->a[0] == doctest::Approx(0.0));
  CHECK(conn->a[1] == doctest::Approx(-2.0));

  CHECK_FALSE(find_rank_one_connection(Matrix::identity(2), -1.0 * Matrix::identity(2)));

  const auto degenerate = find_rank_one_connection(Matrix::identity(2), Matrix::identity(2));
  REQUIRE(degenerate.has_value());
  CHECK(degenerate->a[0] == 0.0);
  CHECK(degenerate->a[1] == 0.0);
  CHECK(degenerate->xi[0] == 1.0);

  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    double x = dist(rng), y = dist(rng);
    const double nrm = std::hypot(x, y);
    if (nrm < 1e-3) continue;
    const std::vector<double> xi{x / nrm, y / nrm};
    const auto c = find_rank_one_connection(Matrix::identity(2), rank_one_reflection(xi));
    REQUIRE(c.has_value());
    // recovered pair equals (-2 xi, xi) up to the sign convention
    const Matrix recon = outer(c->a, c->xi);
    CHECK(frob(recon - (-2.0) * outer(xi, xi)) < 1e-10);
  }
}

TEST_CASE("hull membership of the orthogonal group") {
  CHECK(hull_membership(Matrix::zero(2)) == HullPosition::Interior);
  CHECK(hull_membership(Matrix::identity(2)) == HullPosition::Boundary);
  const double c = std::cos(M_PI / 6.0), s = std::sin(M_PI / 6.0);
  CHECK(hull_membership(0.5 * Matrix::from_rows2(c, -s, s, c)) == HullPosition::Interior);
  CHECK(hull_membership(Matrix::diag(1.5, 0.2)) == HullPosition::Outside);
}

TEST_CASE("laminate construction") {
  const auto conn = find_rank_one_connection(Matrix::identity(2), Matrix::diag(1.0, -1.0));
  REQUIRE(conn.has_value());
  const Rect dom{0.0, 0.0, 1.0, 1.0};

  LaminateSpec spec{*conn, 0.5, 8, dom};
  const PiecewiseAffineMap map = laminate_build(spec);
  REQUIRE(map.cell_count() > 0);

  // average gradient and per-phase area fraction
  Matrix avg = Matrix::zero(2);
  double area = 0.0, area_a = 0.0;
  for (int c = 0; c < map.cell_count(); ++c) {
    const double a = map.cell_area(c);
    avg += a * map.gradients[static_cast<std::size_t>(c)];
    area += a;
    if (frob(map.gradients[static_cast<std::size_t>(c)] - Matrix::identity(2)) < 1e-12)
      area_a += a;
  }
  avg *= 1.0 / area;
  CHECK(area == doctest::Approx(1.0));
  CHECK(frob(avg - Matrix::diag(1.0, 0.0)) < 1e-12);
  CHECK(area_a == doctest::Approx(0.5).epsilon(1e-10));

  // stored gradients reproduce the vertex differences
  for (int c = 0; c < map.cell_count(); ++c)
    CHECK(frob(map.gradient_from_vertices(c) - map.gradients[static_cast<std::size_t>(c)]) <
          1e-10);

  // interfaces counted: phase flips between all 16 sub-slabs
  REQUIRE(map.laminate.has_value());
  CHECK(map.laminate->segments.size() == 15);

  // single layer, pure phase A: u = Ax
  LaminateSpec affine_spec{*conn, 1.0, 1, dom};
  const PiecewiseAffineMap aff = laminate_build(affine_spec);
  for (int c = 0; c < aff.cell_count(); ++c)
    CHECK(frob(aff.gradients[static_cast<std::size_t>(c)] - Matrix::identity(2)) < 1e-14);
  for (std::size_t v = 0; v < aff.vertices.size(); ++v) {
    CHECK(aff.values[v][0] == doctest::Approx(aff.vertices[v].x));
    CHECK(aff.values[v][1] == doctest::Approx(aff.vertices[v].y));
  }
}

TEST_CASE("laminate with an oblique normal stays continuous") {
  const double r2 = 1.0 / std::sqrt(2.0);
  const Matrix b = rank_one_reflection({r2, r2});
  const auto conn = find_rank_one_connection(Matrix::identity(2), b);
  REQUIRE(conn.has_value());
  const PiecewiseAffineMap map =
      laminate_build(LaminateSpec{*conn, 0.5, 6, Rect{0.0, 0.0, 1.0, 1.0}});
  double area = 0.0;
  for (int c = 0; c < map.cell_count(); ++c) {
    area += map.cell_area(c);
    CHECK(frob(map.gradient_from_vertices(c) - map.gradients[static_cast<std::size_t>(c)]) <
          1e-9);
  }
  CHECK(area == doctest::Approx(1.0));

  // both wells in O(2): the tensor is constant across phases
  const Lagrangian L = make_dirichlet(2.0, 2);
  CHECK(frob(em_tensor(L, conn->well_a) - em_tensor(L, conn->well_b)) < 1e-12);
}

TEST_CASE("laminate rejects non-rank-one data") {
  RankOneConnection fake{Matrix::identity(2), -1.0 * Matrix::identity(2), {1.0, 0.0}, {1.0, 0.0}};
  CHECK_THROWS_AS(laminate_build(LaminateSpec{fake, 0.5, 4, Rect{0.0, 0.0, 1.0, 1.0}}),
                  InvalidConnection);
}

TEST_CASE("hull decomposition into orthogonal atoms") {
  const HullDecomposition zero = hull_decompose(Matrix::zero(2));
  for (const auto& [w, r] : zero.atoms) CHECK(w == doctest::Approx(0.25));

  const HullDecomposition id = hull_decompose(Matrix::identity(2));
  double wid = 0.0;
  for (const auto& [w, r] : id.atoms)
    if (frob(r - Matrix::identity(2)) < 1e-12) wid += w;
  CHECK(wid == doctest::Approx(1.0));

  const HullDecomposition mid = hull_decompose(Matrix::diag(0.5, 0.25));
  const std::array<double, 4> want{0.75 * 0.625, 0.75 * 0.375, 0.25 * 0.625, 0.25 * 0.375};
  double wsum = 0.0;
  Matrix recon = Matrix::zero(2);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(mid.atoms[i].first == doctest::Approx(want[i]));
    wsum += mid.atoms[i].first;
    recon += mid.atoms[i].first * mid.atoms[i].second;
    // every atom is orthogonal
    CHECK(frob(transpose(mid.atoms[i].second) * mid.atoms[i].second - Matrix::identity(2)) <
          1e-12);
  }
  CHECK(std::abs(wsum - 1.0) < 1e-14);
  CHECK(frob(recon - mid.m) < 1e-12);

  // every split edge is rank one
  for (const auto& [w1, l1] : mid.level1) {
    const Matrix d = l1 - mid.m;
    if (frob(d) > 1e-14) CHECK(singular_values(d)[1] < 1e-12 * frob(d));
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const Matrix parent = mid.level1[i / 2].second;
    const Matrix d = mid.atoms[i].second - parent;
    if (frob(d) > 1e-14) CHECK(singular_values(d)[1] < 1e-12 * frob(d));
  }

  CHECK_THROWS_AS(hull_decompose(Matrix::diag(1.5, 0.0)), OutsideHull);
}

TEST_CASE("diagonal well ordering") {
  CHECK(diagonal_well_ordering(Matrix::diag(2.0, 2.5), Matrix::diag(1.0, 6.0)));
  CHECK_FALSE(diagonal_well_ordering(Matrix::diag(2.0, 3.0), Matrix::diag(1.0, 4.0)));
  CHECK_FALSE(diagonal_well_ordering(Matrix::diag(2.0, 2.5), Matrix::diag(2.0, 2.5)));
  CHECK_THROWS_AS(diagonal_well_ordering(Matrix::from_rows2(1.0, 0.5, 0.0, 2.0),
                                         Matrix::diag(1.0, 2.0)),
                  BadShape);
}

TEST_CASE("non-injectivity family scans are empty") {
  CHECK(scan_dirichlet_conformal(1.0, default_scan_grid(1.0, 3.0, 0.1)).empty());
  CHECK(scan_qmean_inverse(Matrix::diag(-2.0, -2.0), default_scan_grid(0.5, 4.0, 0.25)).empty());
  CHECK(scan_inv_power_scalar(default_scan_grid(0.5, 4.0, 0.25)).empty());
}

TEST_CASE("sampled rank-one convexity") {
  CHECK(rank_one_convexity_sample(make_dirichlet(2.0, 2), 2000).pass);
  CHECK(rank_one_convexity_sample(make_ball(2.0, 2.0, 2), 2000).pass);

  const RankOneConvexityResult quartic =
      rank_one_convexity_sample(make_quartic_shell(), 10000);
  CHECK_FALSE(quartic.pass);
  REQUIRE(quartic.witness.has_value());
  CHECK(quartic.witness->second_difference < -1e-6);
  // re-verify the witness by direct evaluation
  const Lagrangian L = make_quartic_shell();
  const Matrix dir = outer(quartic.witness->u, quartic.witness->v);
  const double t = quartic.witness->t, d = 1e-2;
  const double second = L.eval_W(quartic.witness->x + (t - d) * dir) -
                        2.0 * L.eval_W(quartic.witness->x + t * dir) +
                        L.eval_W(quartic.witness->x + (t + d) * dir);
  CHECK(second == doctest::Approx(quartic.witness->second_difference));
}

TEST_CASE("staircase refinement") {
  const Matrix m = Matrix::diag(0.5, 0.25);
  const StaircaseResult res = staircase_refine(m, 3);
  REQUIRE(res.trace.size() == 4);
  CHECK(res.trace[0].bad_measure == doctest::Approx(1.0));
  for (std::size_t i = 0; i < res.trace.size(); ++i)
    CHECK(res.trace[i].boundary_error == 0.0);
  for (std::size_t i = 1; i < res.trace.size(); ++i)
    CHECK(res.trace[i].bad_measure < res.trace[i - 1].bad_measure);
  for (const Matrix& g : res.map.gradients)
    CHECK(hull_membership(g) != HullPosition::Outside);

  // zero matrix: first stage strictly improves on the affine map
  const StaircaseResult zero = staircase_refine(Matrix::zero(2), 1);
  CHECK(zero.trace[1].bad_measure < zero.trace[0].bad_measure);

  // orthogonal data is already a solution
  const StaircaseResult id = staircase_refine(Matrix::identity(2), 2);
  for (const auto& row : id.trace) CHECK(row.bad_measure == 0.0);

  CHECK_THROWS_AS(staircase_refine(Matrix::diag(1.5, 0.2), 2), OutsideHull);
  CHECK_THROWS_AS(staircase_refine(m, 13), StageLimit);
}
