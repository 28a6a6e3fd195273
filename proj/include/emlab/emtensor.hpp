#pragma once

// Energy-momentum tensor T(X) = X^T DW(X) - W(X) I, its reduced form on
// Y = X^T X, invariance/symmetry defects, the per-family level-set
// inversions, and the Euler-Lagrange obstruction quantities at X = I.

#include <array>
#include <functional>
#include <string>

#include "emlab/lagrangian.hpp"

namespace emlab {

Matrix em_tensor(const Lagrangian& L, const Matrix& x);

// Reduced tensor on Y = X^T X. Uses the per-family closed forms for the
// dirichlet/qmean/inv_power/ball registry entries; any other Lagrangian
// goes through the generic sym_sqrt path.
Matrix reduced_em(const Lagrangian& L, const SymPsdMatrix& y);
Matrix reduced_em_generic(const Lagrangian& L, const SymPsdMatrix& y);  // via sym_sqrt

struct InvarianceDefect {
  double tensor_defect;       // |T(RX) - T(X)|
  double equivariance_defect; // |DW(RX) - R DW(X)|
};
InvarianceDefect check_invariance(const Lagrangian& L, const Matrix& x, const Matrix& r);

double check_symmetry(const Lagrangian& L, const Matrix& x);  // |T(X) - T(X)^T|

// Dirichlet trace inversion. Throws ConformalCase at p = n and NotInImage
// when the trace sign or PSD requirement fails.
SymPsdMatrix invert_reduced_dirichlet(const Matrix& z, double p, int n);

// One-parameter non-injectivity family for p = n = 2: Y = diag(t, t - c).
SymPsdMatrix conformal_family_dirichlet(double c, double t);

// q-mean inversion Y(t) = -2 t Z^{-1} for n = 2, q = 1.
SymPsdMatrix invert_reduced_qmean2d(const Matrix& z, double t);

enum class ElVerdict { CompatibleAllXi, IncompatibleAllXi, Mixed };

struct ObstructionReport {
  double q_min = 0.0;   // extrema of <xi, DW(I) xi> over the unit sphere
  double q_max = 0.0;
  double trace_cond = 0.0;  // tr(T(I)) + n W(I)
  Matrix dw_identity;       // DW(I)
  ElVerdict verdict = ElVerdict::Mixed;
};
ObstructionReport el_obstruction(const Lagrangian& L);
std::string to_string(ElVerdict v);

struct CoercivityReport {
  double lambda1;     // min eigenvalue of A
  double defect_sym;  // max |<Y, XA> - <YA, X>| over the sample sweep
  double worst_slack; // min of <X, XA> - lambda1 |X|^2 over the sweep (>= 0)
};
CoercivityReport coercive_right_multiplier(const Matrix& a, int samples = 100,
                                           unsigned seed = 42);

// A C^2 synthetic map with analytic gradient, used only by the divergence
// identity check.
struct SmoothMap2 {
  std::string name;
  std::function<std::array<double, 2>(double, double)> value;
  std::function<Matrix(double, double)> grad;
};
SmoothMap2 smooth_map_affine(const Matrix& m, double bx = 0.0, double by = 0.0);
SmoothMap2 smooth_map_bend();   // (x + 0.1 x^2, y)
SmoothMap2 smooth_map_shear();  // (x + 0.05 x y, y - 0.05 x^2)

// Max over interior grid points of |Div T(Du) - Du^T Div DW(Du)| with
// central differences of step h on [0,1]^2.
double tel_identity_check(const SmoothMap2& u, const Lagrangian& L, double h);

}  // namespace emlab
