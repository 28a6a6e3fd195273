#include "emlab/weakform.hpp"

#include <algorithm>
#include <cmath>

#include "emlab/emtensor.hpp"
#include "json.hpp"

namespace emlab {

GaussRule gauss_legendre(int n) {
  if (n < 1) throw BadParam("Gauss rule needs at least one node");
  GaussRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n, starting from the Chebyshev-like guess
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double pn = (n == 1) ? x : p1;
      const double pm = (n == 1) ? 1.0 : p0;
      dp = n * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = (1.0 - x) / 2.0;  // ascending on [0,1]
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double TestField::bump(Vec2 p) const {
  if (p.x <= box.x0 || p.x >= box.x1() || p.y <= box.y0 || p.y >= box.y1()) return 0.0;
  const double hx = box.width / 2.0, hy = box.height / 2.0;
  const double sx = (p.x - box.x0) * (box.x1() - p.x) / (hx * hx);
  const double sy = (p.y - box.y0) * (box.y1() - p.y) / (hy * hy);
  return std::pow(sx * sy, degree);
}

std::array<double, 2> TestField::bump_grad(Vec2 p) const {
  if (p.x <= box.x0 || p.x >= box.x1() || p.y <= box.y0 || p.y >= box.y1()) return {0.0, 0.0};
  const double hx = box.width / 2.0, hy = box.height / 2.0;
  const double sx = (p.x - box.x0) * (box.x1() - p.x) / (hx * hx);
  const double sy = (p.y - box.y0) * (box.y1() - p.y) / (hy * hy);
  const double dsx = (box.x0 + box.x1() - 2.0 * p.x) / (hx * hx);
  const double dsy = (box.y0 + box.y1() - 2.0 * p.y) / (hy * hy);
  const double common = std::pow(sx * sy, degree - 1) * degree;
  return {common * dsx * sy, common * sx * dsy};
}

std::array<double, 2> TestField::value(Vec2 p) const {
  const double b = bump(p);
  return {direction[0] * b, direction[1] * b};
}

Matrix TestField::gradient(Vec2 p) const {
  const auto g = bump_grad(p);
  return Matrix::from_rows2(direction[0] * g[0], direction[0] * g[1], direction[1] * g[0],
                            direction[1] * g[1]);
}

TestField make_bump_field(const Rect& domain, const Rect& box,
                          const std::array<double, 2>& direction, int degree) {
  if (degree < 2) throw BadParam("bump degree must be >= 2");
  if (box.width <= 0.0 || box.height <= 0.0) throw BoxOutsideDomain("box is degenerate");
  if (box.x0 <= domain.x0 || box.x1() >= domain.x1() || box.y0 <= domain.y0 ||
      box.y1() >= domain.y1())
    throw BoxOutsideDomain();
  return TestField{box, direction, degree};
}

std::vector<TestField> default_battery(const Rect& domain) {
  std::vector<TestField> fields;
  const double scale = std::min(domain.width, domain.height);
  for (double half_frac : {0.2, 0.12, 0.07})
    for (double cx_frac : {0.25, 0.5, 0.75})
      for (double cy_frac : {0.25, 0.5, 0.75})
        for (int dir = 0; dir < 2; ++dir) {
          const double half = half_frac * scale;
          const double cx = domain.x0 + cx_frac * domain.width;
          const double cy = domain.y0 + cy_frac * domain.height;
          const Rect box{cx - half, cy - half, 2.0 * half, 2.0 * half};
          std::array<double, 2> d{0.0, 0.0};
          d[static_cast<std::size_t>(dir)] = 1.0;
          fields.push_back(make_bump_field(domain, box, d, 3));
        }
  return fields;
}

namespace {

// Integral over t in [0,1] of lambda(p0 + t (p1 - p0)), split at the box
// boundary lines so each Gauss panel sees a single polynomial piece.
std::array<double, 2> edge_lambda_integral(const TestField& f, Vec2 p0, Vec2 p1,
                                           const GaussRule& rule) {
  const Vec2 e = p1 - p0;
  std::vector<double> ts{0.0, 1.0};
  auto cut = [&](double coord0, double slope, double level) {
    if (slope == 0.0) return;
    const double t = (level - coord0) / slope;
    if (t > 0.0 && t < 1.0) ts.push_back(t);
  };
  cut(p0.x, e.x, f.box.x0);
  cut(p0.x, e.x, f.box.x1());
  cut(p0.y, e.y, f.box.y0);
  cut(p0.y, e.y, f.box.y1());
  std::sort(ts.begin(), ts.end());
  std::array<double, 2> acc{0.0, 0.0};
  for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
    const double ta = ts[k], tb = ts[k + 1];
    if (tb - ta < 1e-15) continue;
    const Vec2 mid = p0 + (0.5 * (ta + tb)) * e;
    if (!f.box.contains(mid)) continue;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double t = ta + (tb - ta) * rule.nodes[q];
      const auto lam = f.value(p0 + t * e);
      const double w = rule.weights[q] * (tb - ta);
      acc[0] += w * lam[0];
      acc[1] += w * lam[1];
    }
  }
  return acc;
}

bool cell_touches_box(const PiecewiseAffineMap& u, int c, const Rect& box) {
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (int k = 0; k < 3; ++k) {
    const Vec2 p = u.vertices[static_cast<std::size_t>(
        u.cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)])];
    x0 = std::min(x0, p.x);
    x1 = std::max(x1, p.x);
    y0 = std::min(y0, p.y);
    y1 = std::max(y1, p.y);
  }
  return x1 > box.x0 && x0 < box.x1() && y1 > box.y0 && y0 < box.y1();
}

double weak_residual(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f,
                     const std::function<Matrix(const Matrix&)>& tensor) {
  const GaussRule rule = gauss_legendre(2 * f.degree + 1);
  double total = 0.0;
  for (int c = 0; c < u.cell_count(); ++c) {
    const Matrix& g = u.gradients[static_cast<std::size_t>(c)];
    if (!L.in_domain(g)) throw DomainViolation();
    if (!cell_touches_box(u, c, f.box)) continue;
    const Matrix t = tensor(g);
    // divergence theorem per cell: integral of d_j lambda_i equals the sum
    // over edges of lambda_i n_j ds; for a ccw edge e the outward normal
    // times ds reduces to the constant (e.y, -e.x) dt
    Matrix dlam_int = Matrix::zero(2);
    const auto& tri = u.cells[static_cast<std::size_t>(c)];
    for (int k = 0; k < 3; ++k) {
      const Vec2 p0 = u.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>(k)])];
      const Vec2 p1 =
          u.vertices[static_cast<std::size_t>(tri[static_cast<std::size_t>((k + 1) % 3)])];
      const Vec2 e = p1 - p0;
      const auto lam = edge_lambda_integral(f, p0, p1, rule);
      for (int i = 0; i < 2; ++i) {
        dlam_int(i, 0) += lam[static_cast<std::size_t>(i)] * e.y;
        dlam_int(i, 1) -= lam[static_cast<std::size_t>(i)] * e.x;
      }
    }
    total += inner(t, dlam_int);
  }
  return total;
}

}  // namespace

double map_energy(const PiecewiseAffineMap& u, const Lagrangian& L) {
  double total = 0.0;
  for (int c = 0; c < u.cell_count(); ++c) {
    const Matrix& g = u.gradients[static_cast<std::size_t>(c)];
    if (!L.in_domain(g)) throw DomainViolation();
    total += u.cell_area(c) * L.eval_W(g);
  }
  return total;
}

double em_weak_residual(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f) {
  return weak_residual(u, L, f, [&L](const Matrix& g) { return em_tensor(L, g); });
}

double el_weak_residual(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f) {
  return weak_residual(u, L, f, [&L](const Matrix& g) { return L.eval_DW(g); });
}

double interface_jump(const PiecewiseAffineMap& u, const Lagrangian& L, const TestField& f) {
  if (!u.laminate) throw NotALaminate();
  const LaminateInterfaces& lam = *u.laminate;
  const Matrix jump_ba = L.eval_DW(lam.well_b) - L.eval_DW(lam.well_a);
  const std::array<double, 2> jv{jump_ba(0, 0) * lam.xi.x + jump_ba(0, 1) * lam.xi.y,
                                 jump_ba(1, 0) * lam.xi.x + jump_ba(1, 1) * lam.xi.y};
  const GaussRule rule = gauss_legendre(2 * f.degree + 1);
  double total = 0.0;
  for (const auto& seg : lam.segments) {
    const double len = norm(seg.p1 - seg.p0);
    if (len == 0.0) continue;
    const auto lam_int = edge_lambda_integral(f, seg.p0, seg.p1, rule);
    const double sign = seg.into_a ? 1.0 : -1.0;  // lower phase minus upper phase
    total += sign * len * (jv[0] * lam_int[0] + jv[1] * lam_int[1]);
  }
  return total;
}

std::vector<double> gradient_distance_field(const PiecewiseAffineMap& u) {
  std::vector<double> out;
  out.reserve(u.gradients.size());
  for (const Matrix& g : u.gradients) {
    const auto s = singular_values(g);
    double d2 = 0.0;
    for (int i = 0; i < g.dim(); ++i) {
      const double e = s[static_cast<std::size_t>(i)] - 1.0;
      d2 += e * e;
    }
    out.push_back(std::sqrt(d2));
  }
  return out;
}

ResidualReport residual_battery(const PiecewiseAffineMap& u, const Lagrangian& L,
                                const std::vector<TestField>& fields, const std::string& map_id) {
  ResidualReport rep;
  rep.lagrangian = L.id();
  rep.map_id = map_id;
  rep.energy = map_energy(u, L);
  for (const TestField& f : fields) {
    FieldResidual r;
    r.box = f.box;
    r.direction = f.direction;
    r.degree = f.degree;
    r.em_residual = em_weak_residual(u, L, f);
    r.el_residual = el_weak_residual(u, L, f);
    rep.fields.push_back(r);
  }
  return rep;
}

std::string residual_report_json(const ResidualReport& report) {
  nlohmann::ordered_json j;
  j["lagrangian"] = report.lagrangian;
  j["map"] = report.map_id;
  j["fields"] = nlohmann::ordered_json::array();
  for (const FieldResidual& f : report.fields) {
    nlohmann::ordered_json jf;
    jf["box"] = {f.box.x0, f.box.y0, f.box.x1(), f.box.y1()};
    jf["direction"] = {f.direction[0], f.direction[1]};
    jf["degree"] = f.degree;
    jf["em_residual"] = f.em_residual;
    jf["el_residual"] = f.el_residual;
    j["fields"].push_back(jf);
  }
  j["energy"] = report.energy;
  return j.dump(2) + "\n";
}

}  // namespace emlab
