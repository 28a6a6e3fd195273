#pragma once

// Registry of energy densities W with analytic gradients DW, validity
// domains and symmetry flags. The DW formulas are implemented analytically;
// fd_gradient is the only oracle against them.

#include <functional>
#include <map>
#include <string>

#include "emlab/matcalc.hpp"

namespace emlab {

enum class Domain { All, Nonsingular, PositiveDet };

struct Lagrangian {
  std::string name;
  std::map<std::string, double> params;
  std::function<double(const Matrix&)> eval_W;
  std::function<Matrix(const Matrix&)> eval_DW;
  Domain domain = Domain::All;
  bool frame_indifferent = true;
  bool right_invariant = true;
  int dim = 2;

  bool in_domain(const Matrix& x) const;
  std::string id() const;  // e.g. "dirichlet:p=2,n=2"
};

Lagrangian make_dirichlet(double p, int n);            // W = |X|^p
Lagrangian make_qmean(int n, double q);                // W = (|X|^n / |det X|)^q
Lagrangian make_inv_power(double p, int n);            // W = |X|^p + |X^-1|^p |det X|
Lagrangian make_ball(double p, double q, int n);       // W = |X|^p + |adj X|^q
Lagrangian make_quartic_shell(int n = 2);              // W = (|X|^2 - 4)^2, not rank-one convex

// n=2 hook: W(X) = sigma(tr(X^T X), det(X^T X)) with user partials.
Lagrangian make_sigma_2d(const std::string& name,
                         const std::function<double(double, double)>& sigma,
                         const std::function<double(double, double)>& d1_sigma,
                         const std::function<double(double, double)>& d2_sigma);

// Parse "name:k=v,k=v" ids used by the CLI. Throws ConfigError on unknown ids.
Lagrangian lagrangian_from_id(const std::string& id);

}  // namespace emlab
