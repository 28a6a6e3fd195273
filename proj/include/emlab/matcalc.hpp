#pragma once

// Small dense matrix algebra for n in {2,3} plus the analytic gradient
// formulas used by the energy densities, with a central finite-difference
// oracle. Everything here is a pure function of its value arguments.

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "emlab/errors.hpp"

namespace emlab {

inline constexpr double kTolSing = 1e-10;  // absolute det threshold
inline constexpr double kTolPsd = 1e-10;   // eigenvalue floor for PSD checks
inline constexpr double kFdStep = 1e-5;    // default central-difference step

class Matrix {
 public:
  explicit Matrix(int n) : n_(check_dim(n)), e_{} {}
  Matrix(int n, const std::array<double, 9>& rowmajor) : n_(check_dim(n)), e_(rowmajor) {}

  static Matrix identity(int n);
  static Matrix zero(int n) { return Matrix(n); }
  static Matrix diag(double a, double b);
  static Matrix diag(double a, double b, double c);
  static Matrix from_rows2(double a, double b, double c, double d);

  int dim() const { return n_; }
  double& operator()(int i, int j) { return e_[static_cast<std::size_t>(i * n_ + j)]; }
  double operator()(int i, int j) const { return e_[static_cast<std::size_t>(i * n_ + j)]; }

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

 private:
  static int check_dim(int n) {
    if (n != 2 && n != 3) throw BadShape("Matrix dimension must be 2 or 3");
    return n;
  }
  int n_;
  std::array<double, 9> e_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(Matrix a, double s);
Matrix operator*(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& x);
double trace(const Matrix& x);
double det(const Matrix& x);
double frob(const Matrix& x);                       // Hilbert-Schmidt norm
double inner(const Matrix& a, const Matrix& b);     // tr(a^T b)
Matrix adjugate(const Matrix& x);                   // adj(x) x = det(x) I
Matrix inverse(const Matrix& x);                    // throws SingularMatrix
Matrix outer(const std::vector<double>& u, const std::vector<double>& v);

// Symmetric PSD values (Y = X^T X and friends). Stored as the upper
// triangle so symmetry is exact by construction.
class SymPsdMatrix {
 public:
  explicit SymPsdMatrix(const Matrix& y);  // symmetrizes exactly: (Y+Y^T)/2
  static SymPsdMatrix diag(double a, double b);
  static SymPsdMatrix diag(double a, double b, double c);

  int dim() const { return n_; }
  double operator()(int i, int j) const;
  Matrix to_matrix() const;

 private:
  SymPsdMatrix(int n) : n_(n), u_{} {}
  int n_;
  std::array<double, 6> u_;  // upper triangle, row by row
};

// Eigendecomposition of a symmetric matrix: closed form for 2x2, cyclic
// Jacobi for 3x3. Eigenvalues ascending, q columns are the eigenvectors.
struct SymEig {
  std::array<double, 3> values;
  Matrix q;
};
SymEig sym_eig(const Matrix& y);

struct Svd {
  Matrix u;
  std::array<double, 3> s;  // descending, s[2] unused for n=2
  Matrix v;
};
Svd svd(const Matrix& x);

std::array<double, 3> singular_values(const Matrix& x);

SymPsdMatrix sym_sqrt(const SymPsdMatrix& y);  // unique PSD root; throws NotPsd

struct PolarFactors {
  Matrix r;       // orthogonal
  SymPsdMatrix s; // PSD, X = r * s
};
PolarFactors polar_factor(const Matrix& x);  // throws SingularMatrix

// Exterior power Lambda^k: C(n,k) x C(n,k) matrix of k-minors in
// lexicographic multi-index order. k=1 reproduces X, k=n reproduces det.
struct ExteriorPower {
  int n;
  int k;
  int size;                      // C(n,k)
  std::array<double, 9> entries; // row-major, size x size
  double operator()(int i, int j) const { return entries[static_cast<std::size_t>(i * size + j)]; }
};
ExteriorPower exterior_power(const Matrix& x, int k);

// Analytic gradient formulas.
Matrix grad_det(const Matrix& x);                       // D det = adj(X)^T
Matrix grad_inv_norm(const Matrix& x, double p);        // D |X^{-1}|^p
Matrix grad_adj_norm_sq(const Matrix& x);               // D |adj X|^2

enum class CompositeBranch { TracePower, AdjPower, DetPower };

struct CompositeGrad {
  Matrix grad;      // DW_i(X)
  Matrix pullback;  // X^T DW_i(X)
};
// W_1 = Phi(tr X^T X), W_2 = Phi(|adj X|^2), W_3 = Phi(det X^T X);
// phi_prime is Phi' evaluated at the corresponding argument.
CompositeGrad grad_composite(const Matrix& x, CompositeBranch which,
                             const std::function<double(double)>& phi_prime);

// Central-difference gradient of a scalar matrix function, the independent
// oracle against which every analytic formula is checked.
Matrix fd_gradient(const std::function<double(const Matrix&)>& w, const Matrix& x,
                   double h = kFdStep);

}  // namespace emlab
