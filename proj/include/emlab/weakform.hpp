#pragma once

// Compactly supported polynomial test fields and exact per-cell quadrature
// of the weak residuals of a piecewise-affine map: since the tensor field is
// constant per cell, each cell integral of D(lambda) reduces to edge line
// integrals evaluated with Gauss-Legendre at full polynomial exactness.

#include <string>
#include <vector>

#include "emlab/lagrangian.hpp"
#include "emlab/mesh.hpp"

namespace emlab {

// Nodes and weights on [0, 1], exact for polynomials of degree 2n - 1.
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre(int n);

// lambda(x) = direction * prod_i ((x_i - a_i)(b_i - x_i) / ((b_i - a_i)/2)^2)^d,
// equal to the direction vector at the box center, vanishing with its
// gradient on and outside the box boundary.
struct TestField {
  Rect box;
  std::array<double, 2> direction{1.0, 0.0};
  int degree = 3;

  double bump(Vec2 p) const;                 // scalar profile in [0, 1]
  std::array<double, 2> bump_grad(Vec2 p) const;
  std::array<double, 2> value(Vec2 p) const;
  Matrix gradient(Vec2 p) const;             // entry (i, j) = d_j lambda_i
};

TestField make_bump_field(const Rect& domain, const Rect& box,
                          const std::array<double, 2>& direction, int degree);

// 3 center rows x 3 center columns x 3 scales x 2 coordinate directions,
// degree 3: the 54-field default battery.
std::vector<TestField> default_battery(const Rect& domain);

double map_energy(const PiecewiseAffineMap& u, const Lagrangian& L);

// Sum over cells of <T(Du_c), integral of D(lambda) over the cell>, the
// cell integral done by the divergence theorem over the edges.
double em_weak_residual(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f);
double el_weak_residual(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f);

// Analytic interface form of the EL residual for laminates: the jump vector
// (DW(B) - DW(A)) xi integrated against lambda along every stored interface.
double interface_jump(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f);

// Per cell, dist(Du_c, O(n)) = |singular values - 1|.
std::vector<double> gradient_distance_field(const PiecewiseAffineMap& u);

struct FieldResidual {
  Rect box;
  std::array<double, 2> direction{};
  int degree = 0;
  double em_residual = 0.0;
  double el_residual = 0.0;
};

struct ResidualReport {
  std::string lagrangian;
  std::string map_id;
  std::vector<FieldResidual> fields;
  double energy = 0.0;
};

ResidualReport residual_battery(const PiecewiseAffineMap& u, const Lagrangian& L,
                                const std::vector<TestField>& fields, const std::string& map_id);

std::string residual_report_json(const ResidualReport& report);

}  // namespace emlab
