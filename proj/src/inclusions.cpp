#include "emlab/inclusions.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace emlab {

namespace {

void require_unit(const std::vector<double>& xi) {
  double s = 0.0;
  for (double c : xi) s += c * c;
  if (std::abs(std::sqrt(s) - 1.0) > 1e-12) throw NotUnit();
}

std::vector<double> column(const Matrix& m, int j) {
  std::vector<double> c(static_cast<std::size_t>(m.dim()));
  for (int i = 0; i < m.dim(); ++i) c[static_cast<std::size_t>(i)] = m(i, j);
  return c;
}

}  // namespace

Matrix rank_one_reflection(const std::vector<double>& xi) {
  const int n = static_cast<int>(xi.size());
  if (n != 2 && n != 3) throw BadShape("reflection direction must have dimension 2 or 3");
  require_unit(xi);
  return Matrix::identity(n) - 2.0 * outer(xi, xi);
}

std::optional<RankOneConnection> find_rank_one_connection(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw BadShape("wells must share a dimension");
  const int n = a.dim();
  const Matrix d = b - a;
  const double nd = frob(d);
  RankOneConnection conn{a, b, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                         std::vector<double>(static_cast<std::size_t>(n), 0.0)};
  if (nd == 0.0) {
    conn.xi[0] = 1.0;
    return conn;
  }
  const Svd f = svd(d);
  // sqrt-of-eigenvalue SVD floors the smallest singular value of an exact
  // rank-one matrix at sqrt(machine eps) ~ 1.5e-8, hence the 1e-7 threshold
  if (f.s[1] > 1e-7 * nd) return std::nullopt;
  conn.a = column(f.u, 0);
  conn.xi = column(f.v, 0);
  for (double& c : conn.a) c *= f.s[0];
  // canonical sign: first nonzero component of xi positive
  for (int i = 0; i < n; ++i) {
    const double c = conn.xi[static_cast<std::size_t>(i)];
    if (c == 0.0) continue;
    if (c < 0.0)
      for (int j = 0; j < n; ++j) {
        conn.xi[static_cast<std::size_t>(j)] = -conn.xi[static_cast<std::size_t>(j)];
        conn.a[static_cast<std::size_t>(j)] = -conn.a[static_cast<std::size_t>(j)];
      }
    break;
  }
  return conn;
}

HullPosition hull_membership(const Matrix& x) {
  const auto s = singular_values(x);
  double smax = 0.0;
  for (int i = 0; i < x.dim(); ++i) smax = std::max(smax, s[static_cast<std::size_t>(i)]);
  if (smax < 1.0 - kTolHull) return HullPosition::Interior;
  if (smax <= 1.0 + kTolHull) return HullPosition::Boundary;
  return HullPosition::Outside;
}

namespace {

// Intersection points of the line <x, xi> = s with the rectangle boundary.
// Computed once per level so adjacent slabs share bitwise-equal vertices.
std::vector<Vec2> rect_cut_points(const Rect& r, Vec2 xi, double s) {
  std::vector<Vec2> pts;
  auto push = [&](Vec2 p) {
    for (const Vec2& q : pts)
      if (std::abs(q.x - p.x) < 1e-12 && std::abs(q.y - p.y) < 1e-12) return;
    pts.push_back(p);
  };
  const double eps = 1e-12;
  if (xi.x != 0.0) {
    for (double y : {r.y0, r.y1()}) {
      const double x = (s - xi.y * y) / xi.x;
      if (x >= r.x0 - eps && x <= r.x1() + eps) push({std::clamp(x, r.x0, r.x1()), y});
    }
  }
  if (xi.y != 0.0) {
    for (double x : {r.x0, r.x1()}) {
      const double y = (s - xi.x * x) / xi.y;
      if (y >= r.y0 - eps && y <= r.y1() + eps) push({x, std::clamp(y, r.y0, r.y1())});
    }
  }
  return pts;
}

Polygon sort_ccw(std::vector<Vec2> pts) {
  if (pts.size() < 3) return {};
  Vec2 c{0.0, 0.0};
  for (const Vec2& p : pts) c = c + p;
  c = (1.0 / static_cast<double>(pts.size())) * c;
  std::sort(pts.begin(), pts.end(), [&](Vec2 p, Vec2 q) {
    return std::atan2(p.y - c.y, p.x - c.x) < std::atan2(q.y - c.y, q.x - c.x);
  });
  // drop duplicates after sorting
  Polygon out;
  for (const Vec2& p : pts) {
    if (!out.empty() && std::abs(out.back().x - p.x) < 1e-12 && std::abs(out.back().y - p.y) < 1e-12)
      continue;
    out.push_back(p);
  }
  if (out.size() >= 2 && std::abs(out.front().x - out.back().x) < 1e-12 &&
      std::abs(out.front().y - out.back().y) < 1e-12)
    out.pop_back();
  return out.size() >= 3 ? out : Polygon{};
}

}  // namespace

PiecewiseAffineMap laminate_build(const LaminateSpec& spec) {
  const RankOneConnection& conn = spec.conn;
  if (conn.well_a.dim() != 2) throw BadShape("laminate_build is n=2 only");
  if (spec.fraction < 0.0 || spec.fraction > 1.0) throw BadParam("fraction must lie in [0,1]");
  if (spec.layers < 1) throw BadParam("layers must be positive");
  require_unit(conn.xi);
  const Matrix rank1 = outer(conn.a, conn.xi);
  const Matrix diff = conn.well_b - conn.well_a;
  if (frob(diff - rank1) > 1e-12 * (1.0 + frob(diff)))
    throw InvalidConnection("B - A does not equal a (x) xi");

  const Vec2 xi{conn.xi[0], conn.xi[1]};
  const Vec2 avec{conn.a[0], conn.a[1]};
  const Rect& r = spec.domain;
  double smin = 1e300, smax = -1e300;
  for (const Vec2& c : r.corners()) {
    smin = std::min(smin, dot(c, xi));
    smax = std::max(smax, dot(c, xi));
  }
  const double w = (smax - smin) / spec.layers;

  // slabs (s_lo, s_hi, phase A?) in increasing s, skipping empty phases
  struct Slab {
    double lo, hi;
    bool phase_a;
  };
  std::vector<Slab> slabs;
  for (int l = 0; l < spec.layers; ++l) {
    const double lo = smin + l * w;
    const double hi = smin + (l + 1) * w;
    const double mid = lo + spec.fraction * w;
    if (spec.fraction > 0.0) slabs.push_back({lo, mid, true});
    if (spec.fraction < 1.0) slabs.push_back({mid, hi, false});
  }

  // G(s): integral of the phase-A indicator from smin, at slab endpoints
  std::vector<double> gpre(slabs.size() + 1, 0.0);
  for (std::size_t i = 0; i < slabs.size(); ++i)
    gpre[i + 1] = gpre[i] + (slabs[i].phase_a ? slabs[i].hi - slabs[i].lo : 0.0);

  std::vector<std::vector<Vec2>> cuts(slabs.size() + 1);
  for (std::size_t i = 0; i < slabs.size(); ++i) cuts[i] = rect_cut_points(r, xi, slabs[i].lo);
  cuts[slabs.size()] = rect_cut_points(r, xi, slabs.back().hi);

  MeshBuilder builder(r);
  LaminateInterfaces meta{conn.well_a, conn.well_b, xi, {}};
  for (std::size_t i = 0; i < slabs.size(); ++i) {
    const Slab& sl = slabs[i];
    std::vector<Vec2> pts = cuts[i];
    pts.insert(pts.end(), cuts[i + 1].begin(), cuts[i + 1].end());
    for (const Vec2& c : r.corners()) {
      const double s = dot(c, xi);
      if (s > sl.lo + 1e-12 && s < sl.hi - 1e-12) pts.push_back(c);
    }
    const Polygon poly = sort_ccw(std::move(pts));
    if (poly.empty() || std::abs(polygon_area(poly)) < 1e-18) continue;
    const double h = sl.phase_a ? 1.0 : 0.0;
    const Matrix g = conn.well_b - h * rank1;  // A on phase A, B elsewhere
    std::vector<std::array<double, 2>> vals;
    vals.reserve(poly.size());
    for (const Vec2& p : poly) {
      const double gval = gpre[i] + h * (dot(p, xi) - sl.lo);
      vals.push_back({conn.well_b(0, 0) * p.x + conn.well_b(0, 1) * p.y - avec.x * gval,
                      conn.well_b(1, 0) * p.x + conn.well_b(1, 1) * p.y - avec.y * gval});
    }
    builder.add_convex_cell(poly, vals, g);
    // interior interface below this slab where the phase flips
    if (i > 0 && slabs[i - 1].phase_a != sl.phase_a && cuts[i].size() == 2)
      meta.segments.push_back({cuts[i][0], cuts[i][1], sl.phase_a});
  }
  PiecewiseAffineMap map = builder.take();
  map.laminate = meta;
  return map;
}

HullDecomposition hull_decompose(const Matrix& m) {
  if (m.dim() != 2) throw BadShape("hull_decompose is n=2 only");
  if (hull_membership(m) == HullPosition::Outside) throw OutsideHull();
  const Svd f = svd(m);
  const double s1 = std::min(f.s[0], 1.0);
  const double s2 = std::min(f.s[1], 1.0);
  HullDecomposition dec{m, {}, {}};
  const Matrix vt = transpose(f.v);
  for (int i = 0; i < 2; ++i) {
    const double e1 = i == 0 ? 1.0 : -1.0;
    const double w1 = (1.0 + e1 * s1) / 2.0;
    dec.level1.emplace_back(w1, f.u * Matrix::diag(e1, s2) * vt);
    for (int j = 0; j < 2; ++j) {
      const double e2 = j == 0 ? 1.0 : -1.0;
      const double w2 = (1.0 + e2 * s2) / 2.0;
      dec.atoms.emplace_back(w1 * w2, f.u * Matrix::diag(e1, e2) * vt);
    }
  }
  return dec;
}

bool diagonal_well_ordering(const Matrix& a, const Matrix& b) {
  if (a.dim() != 2 || b.dim() != 2) throw BadShape("well ordering check is n=2 only");
  if (std::abs(a(0, 1)) > 1e-14 || std::abs(a(1, 0)) > 1e-14 || std::abs(b(0, 1)) > 1e-14 ||
      std::abs(b(1, 0)) > 1e-14)
    throw BadShape("wells must be diagonal");
  double a1 = a(0, 0), a2 = a(1, 1), b1 = b(0, 0), b2 = b(1, 1);
  if (a1 > a2) std::swap(a1, a2);
  if (b1 > b2) std::swap(b1, b2);
  if (a1 <= 0.0 || b1 <= 0.0) return false;
  return b1 < a1 && a2 < b2 && a1 * a2 <= b1 * b2;
}

std::vector<double> default_scan_grid(double lo, double hi, double step) {
  std::vector<double> g;
  for (int i = 0;; ++i) {
    const double t = lo + i * step;
    if (t > hi + 1e-12) break;
    g.push_back(t);
  }
  return g;
}

namespace {

Matrix sorted_principal_stretches(const Matrix& y) {
  const SymEig eig = sym_eig(y);
  const double l0 = eig.values[0], l1 = eig.values[1];
  if (l0 < -1e-12) throw BadParam("family matrix is not PSD");
  return Matrix::diag(std::sqrt(std::max(l0, 0.0)), std::sqrt(std::max(l1, 0.0)));
}

ScanViolations scan_pairs(const std::vector<double>& grid,
                          const std::function<Matrix(double)>& y_of_t) {
  ScanViolations bad;
  std::vector<Matrix> wells;
  wells.reserve(grid.size());
  for (double t : grid) wells.push_back(sorted_principal_stretches(y_of_t(t)));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = i + 1; j < grid.size(); ++j)
      if (diagonal_well_ordering(wells[i], wells[j]) || diagonal_well_ordering(wells[j], wells[i]))
        bad.emplace_back(grid[i], grid[j]);
  return bad;
}

}  // namespace

ScanViolations scan_dirichlet_conformal(double c, const std::vector<double>& t_grid) {
  if (c < 0.0) throw BadParam("conformal family needs c >= 0");
  for (double t : t_grid)
    if (t < c) throw BadParam("conformal family needs t >= c on the grid");
  return scan_pairs(t_grid, [c](double t) { return Matrix::diag(t, t - c); });
}

ScanViolations scan_qmean_inverse(const Matrix& z, const std::vector<double>& t_grid) {
  if (z.dim() != 2) throw BadParam("qmean family scan is n=2 only");
  const Matrix zi = inverse(z);
  return scan_pairs(t_grid, [zi](double t) { return (-2.0 * t) * zi; });
}

ScanViolations scan_inv_power_scalar(const std::vector<double>& alpha_grid) {
  for (double a : alpha_grid)
    if (a <= 0.0) throw BadParam("scalar family needs alpha > 0");
  return scan_pairs(alpha_grid, [](double a) { return Matrix::diag(a * a, a * a); });
}

RankOneConvexityResult rank_one_convexity_sample(const Lagrangian& L, int samples,
                                                 unsigned seed) {
  if (samples < 1) throw BadParam("samples must be >= 1");
  const int n = L.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> big(-1.5, 1.5);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> tdist(-0.5, 0.5);
  const double delta = 1e-2;
  RankOneConvexityResult res;
  for (int s = 0; s < samples; ++s) {
    Matrix x(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) x(i, j) = big(rng);
    std::vector<double> u(static_cast<std::size_t>(n)), v(static_cast<std::size_t>(n));
    for (auto& c : u) c = unit(rng);
    for (auto& c : v) c = unit(rng);
    const Matrix dir = outer(u, v);
    const double t = tdist(rng);
    const Matrix xm = x + (t - delta) * dir;
    const Matrix x0 = x + t * dir;
    const Matrix xp = x + (t + delta) * dir;
    if (!L.in_domain(xm) || !L.in_domain(x0) || !L.in_domain(xp)) continue;
    const double fm = L.eval_W(xm), f0 = L.eval_W(x0), fp = L.eval_W(xp);
    const double second = fm - 2.0 * f0 + fp;
    const double scale = 1.0 + std::abs(fm) + std::abs(f0) + std::abs(fp);
    if (second < -1e-10 * scale) {
      res.pass = false;
      res.witness = RankOneWitness{x, u, v, t, second};
      return res;
    }
  }
  return res;
}

}  // namespace emlab
