#pragma once

// Geometry of O(n) and its convex hull: rank-one connections, two-well
// laminates, a depth-2 lamination witness for hull membership, the diagonal
// well-ordering check and the non-injectivity family scans, and a sampled
// rank-one convexity test.

#include <optional>
#include <utility>
#include <vector>

#include "emlab/lagrangian.hpp"
#include "emlab/mesh.hpp"

namespace emlab {

inline constexpr double kTolHull = 1e-9;  // singular-value slack for co O(n)

// R = I - 2 xi (x) xi; orthogonal with det = -1.
Matrix rank_one_reflection(const std::vector<double>& xi);

struct RankOneConnection {
  Matrix well_a;
  Matrix well_b;
  std::vector<double> a;   // B - A = a (x) xi
  std::vector<double> xi;  // unit, first nonzero component positive
};

// SVD-based test: the second singular value of B - A must be <= 1e-7 |B - A|.
// B = A degenerates to a = 0, xi = e1.
std::optional<RankOneConnection> find_rank_one_connection(const Matrix& a, const Matrix& b);

enum class HullPosition { Interior, Boundary, Outside };
HullPosition hull_membership(const Matrix& x);

struct LaminateSpec {
  RankOneConnection conn;
  double fraction = 0.5;  // volume fraction of well A
  int layers = 8;
  Rect domain;
};

// Continuous piecewise-affine u with Du alternating between the two wells
// across `layers` equal slabs normal to xi; the A phase fills the leading
// `fraction` of each slab. Boundary values follow u(x) = Bx - a G(<x,xi>).
PiecewiseAffineMap laminate_build(const LaminateSpec& spec);

// Depth-2 rank-one split of M in co O(2) into four O(2) atoms.
struct HullDecomposition {
  Matrix m;
  std::vector<std::pair<double, Matrix>> level1;  // U diag(+-1, s2) V^T, 2 entries
  std::vector<std::pair<double, Matrix>> atoms;   // U diag(+-1, +-1) V^T, 4 entries
};
HullDecomposition hull_decompose(const Matrix& m);  // throws OutsideHull

// For diagonal 2x2 wells with entries sorted ascending: the conjunction
// 0 < b1 < a1 <= a2 < b2 and det(A) <= det(B). Non-positive entries simply
// fail the conjunction; non-diagonal input is rejected.
bool diagonal_well_ordering(const Matrix& a, const Matrix& b);

// Parameter pairs (t1, t2) of a one-parameter matrix family where the
// ordering hypothesis holds in either order; expected empty on all three
// built-in families.
using ScanViolations = std::vector<std::pair<double, double>>;
ScanViolations scan_dirichlet_conformal(double c, const std::vector<double>& t_grid);
ScanViolations scan_qmean_inverse(const Matrix& z, const std::vector<double>& t_grid);
ScanViolations scan_inv_power_scalar(const std::vector<double>& alpha_grid);
std::vector<double> default_scan_grid(double lo, double hi, double step);

struct RankOneWitness {
  Matrix x;
  std::vector<double> u;
  std::vector<double> v;
  double t = 0.0;
  double second_difference = 0.0;
};

struct RankOneConvexityResult {
  bool pass = true;
  std::optional<RankOneWitness> witness;
};

// Seeded second-difference probe of t -> W(X + t u (x) v). A violation is a
// second difference below -1e-10 * local scale.
RankOneConvexityResult rank_one_convexity_sample(const Lagrangian& L, int samples,
                                                 unsigned seed = 42);

}  // namespace emlab
