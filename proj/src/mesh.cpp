#include "emlab/mesh.hpp"

#include <cmath>
#include <fstream>
#include <limits>

namespace emlab {

Polygon clip_halfplane(const Polygon& poly, Vec2 normal, double offset) {
  Polygon out;
  const std::size_t n = poly.size();
  if (n == 0) return out;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 cur = poly[i];
    const Vec2 nxt = poly[(i + 1) % n];
    const double dc = dot(normal, cur) - offset;
    const double dn = dot(normal, nxt) - offset;
    if (dc <= 0.0) out.push_back(cur);
    if ((dc < 0.0 && dn > 0.0) || (dc > 0.0 && dn < 0.0)) {
      const double t = dc / (dc - dn);
      out.push_back(cur + t * (nxt - cur));
    }
  }
  return out;
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

Vec2 polygon_centroid(const Polygon& poly) {
  double a = 0.0;
  Vec2 c{0.0, 0.0};
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double w = cross(poly[i], poly[(i + 1) % n]);
    a += w;
    c = c + w * (poly[i] + poly[(i + 1) % n]);
  }
  if (a == 0.0) return poly.empty() ? Vec2{} : poly[0];
  return (1.0 / (3.0 * a)) * c;
}

double polygon_inradius_at(const Polygon& poly, Vec2 p) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 a = poly[i];
    const Vec2 b = poly[(i + 1) % n];
    const Vec2 e = b - a;
    const double len = norm(e);
    if (len == 0.0) continue;
    best = std::min(best, cross(e, p - a) / len);  // ccw polygon: inside is positive
  }
  return best;
}

double PiecewiseAffineMap::cell_area(int c) const {
  const auto& t = cells[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[static_cast<std::size_t>(t[0])];
  const Vec2 b = vertices[static_cast<std::size_t>(t[1])];
  const Vec2 d = vertices[static_cast<std::size_t>(t[2])];
  return 0.5 * std::abs(cross(b - a, d - a));
}

Matrix PiecewiseAffineMap::gradient_from_vertices(int c) const {
  const auto& t = cells[static_cast<std::size_t>(c)];
  const Vec2 a = vertices[static_cast<std::size_t>(t[0])];
  const Vec2 b = vertices[static_cast<std::size_t>(t[1])];
  const Vec2 d = vertices[static_cast<std::size_t>(t[2])];
  const auto& ua = values[static_cast<std::size_t>(t[0])];
  const auto& ub = values[static_cast<std::size_t>(t[1])];
  const auto& ud = values[static_cast<std::size_t>(t[2])];
  // solve G [b-a, d-a] = [ub-ua, ud-ua]
  const Matrix e = Matrix::from_rows2(b.x - a.x, d.x - a.x, b.y - a.y, d.y - a.y);
  const Matrix f = Matrix::from_rows2(ub[0] - ua[0], ud[0] - ua[0], ub[1] - ua[1], ud[1] - ua[1]);
  return f * inverse(e);
}

MeshBuilder::MeshBuilder(Rect domain) { map_.domain = domain; }

int MeshBuilder::add_vertex(Vec2 p, std::array<double, 2> value) {
  const auto key = std::make_pair(p.x, p.y);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  const int idx = static_cast<int>(map_.vertices.size());
  map_.vertices.push_back(p);
  map_.values.push_back(value);
  index_.emplace(key, idx);
  return idx;
}

void MeshBuilder::add_convex_cell(const Polygon& poly,
                                  const std::vector<std::array<double, 2>>& values,
                                  const Matrix& gradient) {
  const std::size_t n = poly.size();
  if (n < 3) return;
  std::vector<int> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = add_vertex(poly[i], values[i]);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    map_.cells.push_back({idx[0], idx[i], idx[i + 1]});
    map_.gradients.push_back(gradient);
  }
}

PiecewiseAffineMap MeshBuilder::take() { return std::move(map_); }

void write_mesh_csv(const PiecewiseAffineMap& map, const std::string& path) {
  std::ofstream out(path);
  out.precision(17);
  out << "cell,x0,y0,x1,y1,x2,y2,u0x,u0y,u1x,u1y,u2x,u2y,g00,g01,g10,g11\n";
  for (int c = 0; c < map.cell_count(); ++c) {
    const auto& t = map.cells[static_cast<std::size_t>(c)];
    out << c;
    for (int k = 0; k < 3; ++k) {
      const Vec2 v = map.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      out << "," << v.x << "," << v.y;
    }
    for (int k = 0; k < 3; ++k) {
      const auto& u = map.values[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
      out << "," << u[0] << "," << u[1];
    }
    const Matrix& g = map.gradients[static_cast<std::size_t>(c)];
    out << "," << g(0, 0) << "," << g(0, 1) << "," << g(1, 0) << "," << g(1, 1) << "\n";
  }
}

}  // namespace emlab
