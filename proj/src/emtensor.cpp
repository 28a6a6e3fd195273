#include "emlab/emtensor.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace emlab {

Matrix em_tensor(const Lagrangian& L, const Matrix& x) {
  if (!L.in_domain(x)) throw SingularMatrix("em_tensor: X outside the Lagrangian domain");
  return transpose(x) * L.eval_DW(x) - L.eval_W(x) * Matrix::identity(x.dim());
}

Matrix reduced_em_generic(const Lagrangian& L, const SymPsdMatrix& y) {
  return em_tensor(L, sym_sqrt(y).to_matrix());
}

Matrix reduced_em(const Lagrangian& L, const SymPsdMatrix& y) {
  const Matrix ym = y.to_matrix();
  const int n = ym.dim();
  const Matrix id = Matrix::identity(n);
  const double tr = trace(ym);
  const double dy = det(ym);
  if (L.name == "dirichlet") {
    const double p = L.params.at("p");
    return p * std::pow(tr, (p - 2.0) / 2.0) * ym - std::pow(tr, p / 2.0) * id;
  }
  if (L.name == "qmean") {
    const double q = L.params.at("q");
    if (dy <= kTolSing || tr <= kTolSing) throw SingularMatrix("qmean reduced tensor needs det Y, tr Y > 0");
    const double dist = std::pow(std::pow(tr, n / 2.0) / std::sqrt(dy), q);
    return (dist / tr) * (q * static_cast<double>(n) * ym - (q + 1.0) * tr * id);
  }
  if (L.name == "inv_power") {
    const double p = L.params.at("p");
    if (dy <= kTolSing) throw SingularMatrix("inv_power reduced tensor needs det Y > 0");
    const Matrix yi = inverse(ym);
    return p * std::pow(tr, (p - 2.0) / 2.0) * ym -
           p * std::sqrt(dy) * std::pow(trace(yi), (p - 2.0) / 2.0) * yi -
           std::pow(tr, p / 2.0) * id;
  }
  if (L.name == "ball") {
    const double p = L.params.at("p");
    const double q = L.params.at("q");
    const Matrix ay = adjugate(ym);
    const double tra = trace(ay);
    return p * std::pow(tr, (p - 2.0) / 2.0) * ym +
           q * std::pow(tra, (q - 2.0) / 2.0) * (tra * id - ay) -
           (std::pow(tr, p / 2.0) + std::pow(tra, q / 2.0)) * id;
  }
  return reduced_em_generic(L, y);
}

InvarianceDefect check_invariance(const Lagrangian& L, const Matrix& x, const Matrix& r) {
  const Matrix gram = transpose(r) * r - Matrix::identity(r.dim());
  if (frob(gram) > 1e-12 * r.dim()) throw NotOrthogonal();
  const Matrix rx = r * x;
  return InvarianceDefect{frob(em_tensor(L, rx) - em_tensor(L, x)),
                          frob(L.eval_DW(rx) - r * L.eval_DW(x))};
}

double check_symmetry(const Lagrangian& L, const Matrix& x) {
  const Matrix t = em_tensor(L, x);
  return frob(t - transpose(t));
}

SymPsdMatrix invert_reduced_dirichlet(const Matrix& z, double p, int n) {
  if (z.dim() != n) throw BadShape("invert_reduced_dirichlet: Z has the wrong dimension");
  if (std::abs(p - n) < 1e-12) throw ConformalCase();
  const double trz = trace(z);
  const double ratio = trz / (p - n);
  if (ratio <= 0.0) throw NotInImage("tr(Z)/(p-n) must be positive");
  const double try_ = std::pow(ratio, 2.0 / p);  // tr(Y)
  const Matrix y = (1.0 / (p * std::pow(try_, p / 2.0 - 1.0))) *
                   (z + std::pow(try_, p / 2.0) * Matrix::identity(n));
  if (sym_eig(y).values[0] < -kTolPsd) throw NotInImage("recovered Y is not PSD");
  return SymPsdMatrix(y);
}

SymPsdMatrix conformal_family_dirichlet(double c, double t) {
  if (c < 0.0 || t < c) throw BadParam("conformal family needs t >= c >= 0");
  return SymPsdMatrix::diag(t, t - c);
}

SymPsdMatrix invert_reduced_qmean2d(const Matrix& z, double t) {
  if (z.dim() != 2) throw BadShape("invert_reduced_qmean2d is n=2 only");
  if (t <= 0.0) throw BadParam("invert_reduced_qmean2d needs t > 0");
  const Matrix y = (-2.0 * t) * inverse(z);  // throws SingularMatrix
  if (sym_eig(y).values[0] < -kTolPsd) throw NotInImage("-2t Z^{-1} is not PSD");
  return SymPsdMatrix(y);
}

ObstructionReport el_obstruction(const Lagrangian& L) {
  const int n = L.dim;
  const Matrix id = Matrix::identity(n);
  const Matrix dw = L.eval_DW(id);
  const Matrix sym = 0.5 * (dw + transpose(dw));
  const SymEig eig = sym_eig(sym);
  ObstructionReport rep{0.0, 0.0, 0.0, dw, ElVerdict::Mixed};
  rep.q_min = eig.values[0];
  rep.q_max = eig.values[static_cast<std::size_t>(n - 1)];
  rep.trace_cond = trace(em_tensor(L, id)) + n * L.eval_W(id);
  const double tol = 1e-10;
  if (std::abs(rep.q_min) <= tol && std::abs(rep.q_max) <= tol)
    rep.verdict = ElVerdict::CompatibleAllXi;
  else if (rep.q_min > tol || rep.q_max < -tol)
    rep.verdict = ElVerdict::IncompatibleAllXi;
  return rep;
}

std::string to_string(ElVerdict v) {
  switch (v) {
    case ElVerdict::CompatibleAllXi:
      return "EL_compatible_all_xi";
    case ElVerdict::IncompatibleAllXi:
      return "EL_incompatible_all_xi";
    case ElVerdict::Mixed:
      return "mixed";
  }
  return "mixed";
}

CoercivityReport coercive_right_multiplier(const Matrix& a, int samples, unsigned seed) {
  const int n = a.dim();
  if (frob(a - transpose(a)) > 1e-12 * (1.0 + frob(a)))
    throw NotPositiveDefinite("A must be symmetric");
  const SymEig eig = sym_eig(a);
  if (eig.values[0] <= 0.0) throw NotPositiveDefinite("A must have positive eigenvalues");
  CoercivityReport rep{eig.values[0], 0.0, std::numeric_limits<double>::infinity()};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  auto random_matrix = [&] {
    Matrix m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = dist(rng);
    return m;
  };
  for (int s = 0; s < samples; ++s) {
    const Matrix x = random_matrix();
    const Matrix y = random_matrix();
    rep.worst_slack = std::min(rep.worst_slack, inner(x, x * a) - rep.lambda1 * inner(x, x));
    rep.defect_sym = std::max(rep.defect_sym, std::abs(inner(y, x * a) - inner(y * a, x)));
  }
  return rep;
}

SmoothMap2 smooth_map_affine(const Matrix& m, double bx, double by) {
  SmoothMap2 u;
  u.name = "affine";
  u.value = [m, bx, by](double x, double y) {
    return std::array<double, 2>{m(0, 0) * x + m(0, 1) * y + bx, m(1, 0) * x + m(1, 1) * y + by};
  };
  u.grad = [m](double, double) { return m; };
  return u;
}

SmoothMap2 smooth_map_bend() {
  SmoothMap2 u;
  u.name = "bend";
  u.value = [](double x, double y) { return std::array<double, 2>{x + 0.1 * x * x, y}; };
  u.grad = [](double x, double) { return Matrix::from_rows2(1.0 + 0.2 * x, 0.0, 0.0, 1.0); };
  return u;
}

SmoothMap2 smooth_map_shear() {
  SmoothMap2 u;
  u.name = "shear";
  u.value = [](double x, double y) {
    return std::array<double, 2>{x + 0.05 * x * y, y - 0.05 * x * x};
  };
  u.grad = [](double x, double y) {
    return Matrix::from_rows2(1.0 + 0.05 * y, 0.05 * x, -0.1 * x, 1.0);
  };
  return u;
}

double tel_identity_check(const SmoothMap2& u, const Lagrangian& L, double h) {
  const int cells = static_cast<int>(std::lround(1.0 / h));
  auto tensor_at = [&](double x, double y) {
    const Matrix g = u.grad(x, y);
    if (!L.in_domain(g)) throw DomainViolation("tel_identity_check: Du left the domain");
    return em_tensor(L, g);
  };
  auto dw_at = [&](double x, double y) {
    const Matrix g = u.grad(x, y);
    if (!L.in_domain(g)) throw DomainViolation("tel_identity_check: Du left the domain");
    return L.eval_DW(g);
  };
  auto divergence = [&](const std::function<Matrix(double, double)>& field, double x, double y) {
    // (Div S)_i = d_x S_i0 + d_y S_i1, central differences
    const Matrix fxp = field(x + h, y), fxm = field(x - h, y);
    const Matrix fyp = field(x, y + h), fym = field(x, y - h);
    std::array<double, 2> d{};
    for (int i = 0; i < 2; ++i)
      d[static_cast<std::size_t>(i)] =
          (fxp(i, 0) - fxm(i, 0)) / (2.0 * h) + (fyp(i, 1) - fym(i, 1)) / (2.0 * h);
    return d;
  };
  double worst = 0.0;
  for (int i = 1; i < cells; ++i)
    for (int j = 1; j < cells; ++j) {
      const double x = i * h, y = j * h;
      const auto div_t = divergence(tensor_at, x, y);
      const auto div_s = divergence(dw_at, x, y);
      const Matrix g = u.grad(x, y);
      double defect = 0.0;
      for (int r = 0; r < 2; ++r) {
        const double rhs = g(0, r) * div_s[0] + g(1, r) * div_s[1];  // (Du^T Div S)_r
        defect += (div_t[static_cast<std::size_t>(r)] - rhs) * (div_t[static_cast<std::size_t>(r)] - rhs);
      }
      worst = std::max(worst, std::sqrt(defect));
    }
  return worst;
}

}  // namespace emlab
