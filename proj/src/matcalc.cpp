#include "emlab/matcalc.hpp"

#include <algorithm>
#include <cmath>

namespace emlab {

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diag(double a, double b) {
  Matrix m(2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

Matrix Matrix::diag(double a, double b, double c) {
  Matrix m(3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

Matrix Matrix::from_rows2(double a, double b, double c, double d) {
  Matrix m(2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  for (int i = 0; i < n_ * n_; ++i) e_[static_cast<std::size_t>(i)] += o.e_[static_cast<std::size_t>(i)];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  for (int i = 0; i < n_ * n_; ++i) e_[static_cast<std::size_t>(i)] -= o.e_[static_cast<std::size_t>(i)];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (auto& v : e_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }
Matrix operator*(Matrix a, double s) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  const int n = a.dim();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

Matrix transpose(const Matrix& x) {
  const int n = x.dim();
  Matrix t(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) t(i, j) = x(j, i);
  return t;
}

double trace(const Matrix& x) {
  double s = 0.0;
  for (int i = 0; i < x.dim(); ++i) s += x(i, i);
  return s;
}

double det(const Matrix& x) {
  if (x.dim() == 2) return x(0, 0) * x(1, 1) - x(0, 1) * x(1, 0);
  return x(0, 0) * (x(1, 1) * x(2, 2) - x(1, 2) * x(2, 1)) -
         x(0, 1) * (x(1, 0) * x(2, 2) - x(1, 2) * x(2, 0)) +
         x(0, 2) * (x(1, 0) * x(2, 1) - x(1, 1) * x(2, 0));
}

double frob(const Matrix& x) { return std::sqrt(inner(x, x)); }

double inner(const Matrix& a, const Matrix& b) {
  const int n = a.dim();
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s += a(i, j) * b(i, j);
  return s;
}

Matrix adjugate(const Matrix& x) {
  const int n = x.dim();
  Matrix a(n);
  if (n == 2) {
    a(0, 0) = x(1, 1);
    a(0, 1) = -x(0, 1);
    a(1, 0) = -x(1, 0);
    a(1, 1) = x(0, 0);
    return a;
  }
  // adj = cof^T; cof(i,j) = (-1)^{i+j} minor(i,j)
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      const int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      a(j, i) = x(r0, c0) * x(r1, c1) - x(r0, c1) * x(r1, c0);
    }
  return a;
}

Matrix inverse(const Matrix& x) {
  const double d = det(x);
  if (std::abs(d) <= kTolSing) throw SingularMatrix();
  return (1.0 / d) * adjugate(x);
}

Matrix outer(const std::vector<double>& u, const std::vector<double>& v) {
  const int n = static_cast<int>(u.size());
  if (v.size() != u.size()) throw BadShape("outer product needs equal-length vectors");
  Matrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u[static_cast<std::size_t>(i)] * v[static_cast<std::size_t>(j)];
  return m;
}

SymPsdMatrix::SymPsdMatrix(const Matrix& y) : n_(y.dim()), u_{} {
  int k = 0;
  for (int i = 0; i < n_; ++i)
    for (int j = i; j < n_; ++j) u_[static_cast<std::size_t>(k++)] = 0.5 * (y(i, j) + y(j, i));
}

SymPsdMatrix SymPsdMatrix::diag(double a, double b) { return SymPsdMatrix(Matrix::diag(a, b)); }
SymPsdMatrix SymPsdMatrix::diag(double a, double b, double c) { return SymPsdMatrix(Matrix::diag(a, b, c)); }

double SymPsdMatrix::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  // index of (i,j), j >= i, in the packed upper triangle
  int k = 0;
  for (int r = 0; r < i; ++r) k += n_ - r;
  k += j - i;
  return u_[static_cast<std::size_t>(k)];
}

Matrix SymPsdMatrix::to_matrix() const {
  Matrix m(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

namespace {

SymEig sym_eig2(const Matrix& y) {
  const double a = y(0, 0), b = 0.5 * (y(0, 1) + y(1, 0)), c = y(1, 1);
  const double mean = 0.5 * (a + c);
  const double r = std::hypot(0.5 * (a - c), b);
  double l0 = mean - r, l1 = mean + r;
  Matrix q = Matrix::identity(2);
  if (r > 0.0) {
    // eigenvector for l1: (b, l1 - a) unless degenerate
    double vx = b, vy = l1 - a;
    if (std::abs(vx) + std::abs(vy) == 0.0) {
      vx = l1 - c;
      vy = b;
    }
    const double nrm = std::hypot(vx, vy);
    if (nrm > 0.0) {
      vx /= nrm;
      vy /= nrm;
      q(0, 0) = -vy;
      q(1, 0) = vx;  // eigenvector for l0, orthogonal to (vx,vy)
      q(0, 1) = vx;
      q(1, 1) = vy;
    }
  }
  return SymEig{{l0, l1, 0.0}, q};
}

SymEig sym_eig3(const Matrix& y) {
  // cyclic Jacobi on the symmetrized copy
  Matrix a(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = 0.5 * (y(i, j) + y(j, i));
  Matrix q = Matrix::identity(3);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) off += a(i, j) * a(i, j);
    if (off < 1e-30) break;
    for (int p = 0; p < 3; ++p)
      for (int qi = p + 1; qi < 3; ++qi) {
        const double apq = a(p, qi);
        if (apq == 0.0) continue;
        const double theta = 0.5 * (a(qi, qi) - a(p, p)) / apq;
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a(k, p), akq = a(k, qi);
          a(k, p) = c * akp - s * akq;
          a(k, qi) = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a(p, k), aqk = a(qi, k);
          a(p, k) = c * apk - s * aqk;
          a(qi, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double qkp = q(k, p), qkq = q(k, qi);
          q(k, p) = c * qkp - s * qkq;
          q(k, qi) = s * qkp + c * qkq;
        }
      }
  }
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  Matrix qs(3);
  std::array<double, 3> vals{};
  for (int c = 0; c < 3; ++c) {
    vals[static_cast<std::size_t>(c)] = a(idx[static_cast<std::size_t>(c)], idx[static_cast<std::size_t>(c)]);
    for (int r = 0; r < 3; ++r) qs(r, c) = q(r, idx[static_cast<std::size_t>(c)]);
  }
  return SymEig{vals, qs};
}

}  // namespace

SymEig sym_eig(const Matrix& y) { return y.dim() == 2 ? sym_eig2(y) : sym_eig3(y); }

Svd svd(const Matrix& x) {
  const int n = x.dim();
  SymEig eig = sym_eig(transpose(x) * x);  // ascending
  Svd out{Matrix(n), {0.0, 0.0, 0.0}, Matrix(n)};
  // descending singular values
  for (int c = 0; c < n; ++c) {
    const int src = n - 1 - c;
    out.s[static_cast<std::size_t>(c)] =
        std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(src)]));
    for (int r = 0; r < n; ++r) out.v(r, c) = eig.q(r, src);
  }
  // u columns: X v / s, with orthonormal completion for tiny s
  for (int c = 0; c < n; ++c) {
    const double s = out.s[static_cast<std::size_t>(c)];
    std::array<double, 3> col{};
    for (int r = 0; r < n; ++r) {
      double acc = 0.0;
      for (int k = 0; k < n; ++k) acc += x(r, k) * out.v(k, c);
      col[static_cast<std::size_t>(r)] = acc;
    }
    double nrm = 0.0;
    for (int r = 0; r < n; ++r) nrm += col[static_cast<std::size_t>(r)] * col[static_cast<std::size_t>(r)];
    nrm = std::sqrt(nrm);
    if (s > 1e-14 * (1.0 + frob(x)) && nrm > 0.0) {
      for (int r = 0; r < n; ++r) out.u(r, c) = col[static_cast<std::size_t>(r)] / nrm;
    } else {
      // pick a unit vector orthogonal to the previous u columns
      for (int cand = 0; cand < n; ++cand) {
        std::array<double, 3> e{};
        e[static_cast<std::size_t>(cand)] = 1.0;
        for (int prev = 0; prev < c; ++prev) {
          double dot = 0.0;
          for (int r = 0; r < n; ++r) dot += e[static_cast<std::size_t>(r)] * out.u(r, prev);
          for (int r = 0; r < n; ++r) e[static_cast<std::size_t>(r)] -= dot * out.u(r, prev);
        }
        double en = 0.0;
        for (int r = 0; r < n; ++r) en += e[static_cast<std::size_t>(r)] * e[static_cast<std::size_t>(r)];
        en = std::sqrt(en);
        if (en > 0.5) {
          for (int r = 0; r < n; ++r) out.u(r, c) = e[static_cast<std::size_t>(r)] / en;
          break;
        }
      }
    }
  }
  return out;
}

std::array<double, 3> singular_values(const Matrix& x) { return svd(x).s; }

SymPsdMatrix sym_sqrt(const SymPsdMatrix& y) {
  const Matrix m = y.to_matrix();
  SymEig eig = sym_eig(m);
  const int n = m.dim();
  if (eig.values[0] < -kTolPsd) throw NotPsd();
  Matrix root(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k)
        s += eig.q(i, k) * std::sqrt(std::max(0.0, eig.values[static_cast<std::size_t>(k)])) * eig.q(j, k);
      root(i, j) = s;
    }
  return SymPsdMatrix(root);
}

PolarFactors polar_factor(const Matrix& x) {
  if (std::abs(det(x)) <= kTolSing) throw SingularMatrix("polar_factor needs |det X| > tol_sing");
  SymPsdMatrix s = sym_sqrt(SymPsdMatrix(transpose(x) * x));
  Matrix r = x * inverse(s.to_matrix());
  return PolarFactors{r, s};
}

namespace {

// lexicographic k-subsets of {0..n-1}
std::vector<std::vector<int>> k_subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

double minor_det(const Matrix& x, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  if (k == 1) return x(rows[0], cols[0]);
  if (k == 2)
    return x(rows[0], cols[0]) * x(rows[1], cols[1]) - x(rows[0], cols[1]) * x(rows[1], cols[0]);
  Matrix sub(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      sub(i, j) = x(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  return det(sub);
}

}  // namespace

ExteriorPower exterior_power(const Matrix& x, int k) {
  const int n = x.dim();
  if (k < 0 || k > n) throw BadGrade();
  const auto subsets = k_subsets(n, k);
  const int sz = static_cast<int>(subsets.size());
  ExteriorPower out{n, k, sz, {}};
  for (int i = 0; i < sz; ++i)
    for (int j = 0; j < sz; ++j)
      out.entries[static_cast<std::size_t>(i * sz + j)] =
          minor_det(x, subsets[static_cast<std::size_t>(i)], subsets[static_cast<std::size_t>(j)]);
  return out;
}

Matrix grad_det(const Matrix& x) { return transpose(adjugate(x)); }

Matrix grad_inv_norm(const Matrix& x, double p) {
  if (p < 1.0) throw BadParam("grad_inv_norm needs p >= 1");
  const Matrix xi = inverse(x);  // throws SingularMatrix below tol
  const Matrix xit = transpose(xi);
  const double nrm = frob(xi);
  return (-p * std::pow(nrm, p - 2.0)) * (xit * xi * xit);
}

Matrix grad_adj_norm_sq(const Matrix& x) {
  const double d = det(x);
  if (std::abs(d) <= kTolSing) throw SingularMatrix("grad_adj_norm_sq needs |det X| > tol_sing");
  const Matrix xt = transpose(x);
  const Matrix a = adjugate(x);
  const double a2 = inner(a, a);
  return (-2.0 / d) * adjugate(xt * x * xt) + (2.0 * a2 / d) * transpose(a);
}

CompositeGrad grad_composite(const Matrix& x, CompositeBranch which,
                             const std::function<double(double)>& phi_prime) {
  const Matrix xt = transpose(x);
  switch (which) {
    case CompositeBranch::TracePower: {
      const double phip = phi_prime(trace(xt * x));
      return CompositeGrad{2.0 * phip * x, 2.0 * phip * (xt * x)};
    }
    case CompositeBranch::AdjPower: {
      const double d = det(x);
      if (std::abs(d) <= kTolSing) throw SingularMatrix("adj branch needs |det X| > tol_sing");
      const Matrix a = adjugate(x);
      const double a2 = inner(a, a);
      const double phip = phi_prime(a2);
      const Matrix grad = phip * ((-2.0 / d) * adjugate(xt * x * xt) + (2.0 * a2 / d) * transpose(a));
      const Matrix pull = phip * ((-2.0) * adjugate(xt * x) + 2.0 * a2 * Matrix::identity(x.dim()));
      return CompositeGrad{grad, pull};
    }
    case CompositeBranch::DetPower: {
      const double d = det(x);
      if (std::abs(d) <= kTolSing) throw SingularMatrix("det branch needs |det X| > tol_sing");
      const Matrix y = xt * x;
      const double phip = phi_prime(det(y));
      return CompositeGrad{2.0 * phip * (x * adjugate(y)),
                           2.0 * phip * det(y) * Matrix::identity(x.dim())};
    }
  }
  throw BadParam("unknown composite branch");
}

Matrix fd_gradient(const std::function<double(const Matrix&)>& w, const Matrix& x, double h) {
  const int n = x.dim();
  Matrix g(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Matrix xp = x, xm = x;
      xp(i, j) += h;
      xm(i, j) -= h;
      g(i, j) = (w(xp) - w(xm)) / (2.0 * h);
    }
  return g;
}

}  // namespace emlab
