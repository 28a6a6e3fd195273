#pragma once

// Triangulated piecewise-affine maps on axis-aligned rectangles, plus the
// small amount of convex-polygon geometry the laminate and staircase
// constructions need.

#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <vector>

#include "emlab/matcalc.hpp"

namespace emlab {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::sqrt(dot(a, a)); }

struct Rect {
  double x0 = 0.0, y0 = 0.0, width = 1.0, height = 1.0;
  double x1() const { return x0 + width; }
  double y1() const { return y0 + height; }
  bool contains(Vec2 p) const {
    return p.x >= x0 && p.x <= x1() && p.y >= y0 && p.y <= y1();
  }
  std::array<Vec2, 4> corners() const {
    return {Vec2{x0, y0}, Vec2{x1(), y0}, Vec2{x1(), y1()}, Vec2{x0, y1()}};
  }
};

using Polygon = std::vector<Vec2>;

// Keep the part of a convex polygon with dot(normal, p) <= offset.
Polygon clip_halfplane(const Polygon& poly, Vec2 normal, double offset);
double polygon_area(const Polygon& poly);
Vec2 polygon_centroid(const Polygon& poly);
// Signed distance margin: min over edges of the inward distance (>= 0 inside).
double polygon_inradius_at(const Polygon& poly, Vec2 p);

// Laminate bookkeeping kept on the mesh so interface quadrature can be done
// analytically later.
struct LaminateInterfaces {
  Matrix well_a;      // phase-A gradient
  Matrix well_b;      // phase-B gradient
  Vec2 xi;            // unit layer normal
  // Each interface is a clipped segment s = const; `into_a` tells whether
  // the phase switches B -> A as s increases through it.
  struct Segment {
    Vec2 p0, p1;
    bool into_a;
  };
  std::vector<Segment> segments;
};

struct PiecewiseAffineMap {
  Rect domain;
  std::vector<Vec2> vertices;
  std::vector<std::array<double, 2>> values;   // u at vertices
  std::vector<std::array<int, 3>> cells;       // triangles, ccw
  std::vector<Matrix> gradients;               // per cell, 2x2
  std::optional<LaminateInterfaces> laminate;

  int cell_count() const { return static_cast<int>(cells.size()); }
  double cell_area(int c) const;
  // Gradient recomputed from the stored vertex values, for cross-checks
  // against the stored per-cell gradient.
  Matrix gradient_from_vertices(int c) const;
  std::array<double, 2> value_at_vertex(int v) const { return values[static_cast<std::size_t>(v)]; }
};

// Fan-triangulate a convex polygon into an existing map, sharing vertices
// through exact-coordinate lookup. Returns the triangle indices added.
class MeshBuilder {
 public:
  explicit MeshBuilder(Rect domain);
  int add_vertex(Vec2 p, std::array<double, 2> value);
  void add_convex_cell(const Polygon& poly, const std::vector<std::array<double, 2>>& values,
                       const Matrix& gradient);
  PiecewiseAffineMap take();

 private:
  PiecewiseAffineMap map_;
  std::map<std::pair<double, double>, int> index_;  // exact-coordinate vertex lookup
};

void write_mesh_csv(const PiecewiseAffineMap& map, const std::string& path);

}  // namespace emlab
