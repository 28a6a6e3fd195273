#include "emlab/staircase.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace emlab {

namespace {

struct AffinePiece {
  double gx = 0.0, gy = 0.0, c = 0.0;  // value gx x + gy y + c
  double at(Vec2 p) const { return gx * p.x + gy * p.y + c; }
};

double o2_distance(const Matrix& g) {
  const auto s = singular_values(g);
  return std::hypot(s[0] - 1.0, s[1] - 1.0);
}

// One lamination direction: singular value s, unit directions u (output) and
// v (input), sawtooth of N teeth over the projection span, clip slope m.
struct Direction {
  double s = 0.0;
  Vec2 u, v;
  double alpha = 0.0;  // tooth slope amplitude 1 - theta
  double mu = 0.0;     // fraction with total slope +alpha
  double pmin = 0.0, width = 0.0;
  int teeth = 0;
};

struct StageGeometry {
  Matrix m;
  Rect rect;
  std::array<Direction, 2> dir;
  double clip = 0.0;  // slope of the boundary-distance cap

  // The four boundary-distance pieces clip * (x - x0) etc.
  std::array<AffinePiece, 4> dist_pieces() const {
    return {AffinePiece{clip, 0.0, -clip * rect.x0}, AffinePiece{-clip, 0.0, clip * rect.x1()},
            AffinePiece{0.0, clip, -clip * rect.y0}, AffinePiece{0.0, -clip, clip * rect.y1()}};
  }
};

// Tooth sub-slab: t in [lo, hi] with psi affine there.
struct SubSlab {
  double lo = 0.0, hi = 0.0;
  AffinePiece psi;
};

std::vector<SubSlab> build_subslabs(const Direction& d) {
  std::vector<SubSlab> out;
  out.reserve(static_cast<std::size_t>(2 * d.teeth));
  const double span = d.width * d.teeth;
  for (int j = 0; j < d.teeth; ++j) {
    const double t0 = d.pmin + j * d.width;
    const double tmid = t0 + d.mu * d.width;
    double t1 = d.pmin + (j + 1) * d.width;
    if (j == d.teeth - 1) t1 = d.pmin + span + 1e-12 * (1.0 + std::abs(span));
    const double up = d.alpha - d.s;
    const double down = -d.alpha - d.s;
    const double peak = up * (tmid - t0);
    // psi(t) = up (t - t0) on the rise, peak + down (t - tmid) on the fall
    out.push_back({j == 0 ? t0 - 1e-12 : t0, tmid,
                   AffinePiece{up * d.v.x, up * d.v.y, -up * t0}});
    out.push_back({tmid, t1, AffinePiece{down * d.v.x, down * d.v.y, peak - down * tmid}});
  }
  return out;
}

Polygon clip_band(const Polygon& poly, Vec2 v, double lo, double hi) {
  Polygon p = clip_halfplane(poly, v, hi);
  return clip_halfplane(p, Vec2{-v.x, -v.y}, -lo);
}

// Restrict to the region where `chosen` attains the min among all pieces.
Polygon clip_argmin(Polygon poly, const std::vector<AffinePiece>& pieces, std::size_t chosen) {
  for (std::size_t j = 0; j < pieces.size() && !poly.empty(); ++j) {
    if (j == chosen) continue;
    const AffinePiece& f = pieces[chosen];
    const AffinePiece& g = pieces[j];
    poly = clip_halfplane(poly, Vec2{f.gx - g.gx, f.gy - g.gy}, g.c - f.c);
  }
  return poly;
}

// Enumerate the linearity polygons of one stage. The emitter receives the
// polygon, the per-cell gradient, and the two chosen perturbation pieces.
void enumerate_stage(const StageGeometry& geo,
                     const std::function<void(const Polygon&, const Matrix&, const AffinePiece&,
                                              const AffinePiece&)>& emit) {
  const auto dist = geo.dist_pieces();
  const auto slabs1 = build_subslabs(geo.dir[0]);
  const auto slabs2 = build_subslabs(geo.dir[1]);
  const Polygon rect_poly = {Vec2{geo.rect.x0, geo.rect.y0}, Vec2{geo.rect.x1(), geo.rect.y0},
                             Vec2{geo.rect.x1(), geo.rect.y1()}, Vec2{geo.rect.x0, geo.rect.y1()}};
  for (const SubSlab& s1 : slabs1) {
    const Polygon band1 = clip_band(rect_poly, geo.dir[0].v, s1.lo, s1.hi);
    if (band1.size() < 3) continue;
    for (const SubSlab& s2 : slabs2) {
      const Polygon base = clip_band(band1, geo.dir[1].v, s2.lo, s2.hi);
      if (base.size() < 3) continue;
      std::vector<AffinePiece> cand1{s1.psi, dist[0], dist[1], dist[2], dist[3]};
      std::vector<AffinePiece> cand2{s2.psi, dist[0], dist[1], dist[2], dist[3]};
      for (std::size_t c1 = 0; c1 < cand1.size(); ++c1) {
        const Polygon r1 = clip_argmin(base, cand1, c1);
        if (r1.size() < 3) continue;
        for (std::size_t c2 = 0; c2 < cand2.size(); ++c2) {
          const Polygon r2 = clip_argmin(r1, cand2, c2);
          if (r2.size() < 3 || std::abs(polygon_area(r2)) < 1e-22) continue;
          const AffinePiece& p1 = cand1[c1];
          const AffinePiece& p2 = cand2[c2];
          Matrix g = geo.m;
          g(0, 0) += geo.dir[0].u.x * p1.gx + geo.dir[1].u.x * p2.gx;
          g(0, 1) += geo.dir[0].u.x * p1.gy + geo.dir[1].u.x * p2.gy;
          g(1, 0) += geo.dir[0].u.y * p1.gx + geo.dir[1].u.y * p2.gx;
          g(1, 1) += geo.dir[0].u.y * p1.gy + geo.dir[1].u.y * p2.gy;
          emit(r2, g, p1, p2);
        }
      }
    }
  }
}

StageGeometry make_stage_geometry(const Matrix& m, const Rect& rect, int stage) {
  const Svd f = svd(m);
  StageGeometry geo{m, rect, {}, 0.0};
  const double s1 = f.s[0];
  const double theta = std::min(0.05, 0.3 * (1.0 - s1));
  geo.clip = std::min(0.2, 0.4 * (1.0 - s1));
  const std::array<int, 2> base_teeth{16, 13};
  for (int i = 0; i < 2; ++i) {
    Direction d;
    d.s = f.s[static_cast<std::size_t>(i)];
    d.u = Vec2{f.u(0, i), f.u(1, i)};
    d.v = Vec2{f.v(0, i), f.v(1, i)};
    d.alpha = 1.0 - theta;
    d.mu = (1.0 + d.s / d.alpha) / 2.0;
    double pmin = 1e300, pmax = -1e300;
    for (const Vec2& c : rect.corners()) {
      pmin = std::min(pmin, dot(c, d.v));
      pmax = std::max(pmax, dot(c, d.v));
    }
    d.pmin = pmin;
    d.teeth = std::max(1, static_cast<int>(std::lround(base_teeth[static_cast<std::size_t>(i)] *
                                                       std::pow(1.6, stage - 1))));
    d.width = (pmax - pmin) / d.teeth;
    geo.dir[static_cast<std::size_t>(i)] = d;
  }
  return geo;
}

bool on_rect_boundary(const Rect& r, Vec2 p) {
  return p.x == r.x0 || p.x == r.x1() || p.y == r.y0 || p.y == r.y1();
}

std::array<double, 2> affine_value(const Matrix& m, Vec2 p) {
  return {m(0, 0) * p.x + m(0, 1) * p.y, m(1, 0) * p.x + m(1, 1) * p.y};
}

PiecewiseAffineMap affine_map(const Matrix& m, const Rect& rect) {
  MeshBuilder b(rect);
  const auto cs = rect.corners();
  std::vector<std::array<double, 2>> vals;
  for (const Vec2& c : cs) vals.push_back(affine_value(m, c));
  b.add_convex_cell({cs[0], cs[1], cs[2], cs[3]}, vals, m);
  return b.take();
}

}  // namespace

StaircaseResult staircase_refine(const Matrix& m, int stages, Rect domain) {
  if (m.dim() != 2) throw BadShape("staircase_refine is n=2 only");
  if (stages < 0) throw BadParam("stages must be >= 0");
  if (stages > kStageLimit) throw StageLimit();
  const HullPosition pos = hull_membership(m);
  if (pos == HullPosition::Outside) throw OutsideHull();
  const double dist0 = o2_distance(m);

  StaircaseResult res;
  res.trace.push_back(RefinementTrace{0, dist0 > kEpsIncl ? 1.0 : 0.0, dist0, 0.0});
  if (dist0 <= 1e-12) {
    // already a solution: every stage is the affine map itself
    for (int k = 1; k <= stages; ++k) res.trace.push_back(RefinementTrace{k, 0.0, dist0, 0.0});
    res.map = affine_map(m, domain);
    return res;
  }
  if (pos != HullPosition::Interior)
    throw OutsideHull("refinement needs an interior matrix or an orthogonal one");

  res.map = affine_map(m, domain);
  const double total_area = domain.width * domain.height;
  for (int k = 1; k <= stages; ++k) {
    const StageGeometry geo = make_stage_geometry(m, domain, k);
    RefinementTrace row{k, 0.0, 0.0, 0.0};
    const bool build_mesh = (k == stages);
    MeshBuilder builder(domain);
    enumerate_stage(geo, [&](const Polygon& poly, const Matrix& g, const AffinePiece& p1,
                             const AffinePiece& p2) {
      if (hull_membership(g) == HullPosition::Outside)
        throw OutsideHull("stage construction produced a gradient outside the hull");
      const double d = o2_distance(g);
      row.linf_defect = std::max(row.linf_defect, d);
      if (d > kEpsIncl) row.bad_measure += polygon_area(poly);
      std::vector<std::array<double, 2>> vals;
      vals.reserve(poly.size());
      for (const Vec2& p : poly) {
        std::array<double, 2> val = affine_value(geo.m, p);
        // the perturbation vanishes on the boundary (the distance cap is 0
        // there and both sawtooth profiles are nonnegative), so boundary
        // vertices carry the exact affine data
        if (!on_rect_boundary(domain, p)) {
          val[0] += geo.dir[0].u.x * p1.at(p) + geo.dir[1].u.x * p2.at(p);
          val[1] += geo.dir[0].u.y * p1.at(p) + geo.dir[1].u.y * p2.at(p);
        } else {
          const std::array<double, 2> exact = affine_value(geo.m, p);
          row.boundary_error =
              std::max(row.boundary_error, std::hypot(val[0] - exact[0], val[1] - exact[1]));
        }
        vals.push_back(val);
      }
      if (build_mesh) builder.add_convex_cell(poly, vals, g);
    });
    row.bad_measure /= total_area;
    res.trace.push_back(row);
    if (build_mesh) res.map = builder.take();
  }
  return res;
}

}  // namespace emlab
