#include "hdivprec/mesh.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <utility>

namespace hdivprec {

const char* to_string(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

namespace {

Eigen::Vector2d rotate_cw(const Eigen::Vector2d& t) { return {t.y(), -t.x()}; }

}  // namespace

Mesh Mesh::unit_square(int n) {
  if (n < 1) throw std::invalid_argument("Mesh::unit_square: need at least one subdivision");

  Mesh m;
  m.n_ = n;

  const int np = n + 1;
  m.vertices_.reserve(np * np);
  for (int iy = 0; iy < np; ++iy)
    for (int ix = 0; ix < np; ++ix)
      m.vertices_.emplace_back(double(ix) / n, double(iy) / n);

  auto vid = [np](int ix, int iy) { return iy * np + ix; };

  m.cells_.reserve(2 * n * n);
  for (int iy = 0; iy < n; ++iy) {
    for (int ix = 0; ix < n; ++ix) {
      const int v00 = vid(ix, iy);
      const int v10 = vid(ix + 1, iy);
      const int v01 = vid(ix, iy + 1);
      const int v11 = vid(ix + 1, iy + 1);
      // split along the diagonal v00 -> v11
      m.cells_.push_back({{v00, v10, v11}});
      m.cells_.push_back({{v00, v11, v01}});
    }
  }

  std::map<std::pair<int, int>, int> edge_of;
  m.cell_edges_.resize(m.cells_.size());
  m.cell_edge_signs_.resize(m.cells_.size());

  for (int c = 0; c < m.num_cells(); ++c) {
    const auto& v = m.cells_[c].vertices;
    for (int i = 0; i < 3; ++i) {
      // edge i is opposite local vertex i
      int a = v[(i + 1) % 3];
      int b = v[(i + 2) % 3];
      auto key = std::minmax(a, b);
      auto it = edge_of.find(key);
      int e;
      if (it == edge_of.end()) {
        e = m.num_edges();
        edge_of.emplace(key, e);
        m.edges_.push_back({{key.first, key.second}});
        m.edge_cells_.push_back({c, -1});
      } else {
        e = it->second;
        m.edge_cells_[e][1] = c;
      }
      m.cell_edges_[c][i] = e;

      // outward normal on a CCW triangle: traverse edge a -> b, rotate clockwise
      const Eigen::Vector2d outward = rotate_cw(m.vertices_[b] - m.vertices_[a]);
      const Eigen::Vector2d global =
          rotate_cw(m.vertices_[key.second] - m.vertices_[key.first]);
      m.cell_edge_signs_[c][i] = outward.dot(global) > 0 ? 1 : -1;
    }
  }

  // order incident cells so the global normal exits the first one
  for (int e = 0; e < m.num_edges(); ++e) {
    auto& cells = m.edge_cells_[e];
    if (cells[1] < 0) continue;
    const auto& ce = m.cell_edges_[cells[0]];
    int li = 0;
    while (ce[li] != e) ++li;
    if (m.cell_edge_signs_[cells[0]][li] < 0) std::swap(cells[0], cells[1]);
  }

  return m;
}

Side Mesh::boundary_side(int e) const {
  if (!is_boundary_edge(e)) throw std::invalid_argument("boundary_side: interior edge");
  const auto& ev = edges_[e].vertices;
  const Eigen::Vector2d a = vertices_[ev[0]];
  const Eigen::Vector2d b = vertices_[ev[1]];
  const double tol = 0.25 * mesh_size();
  if (a.x() < tol && b.x() < tol) return Side::Left;
  if (a.x() > 1.0 - tol && b.x() > 1.0 - tol) return Side::Right;
  if (a.y() < tol && b.y() < tol) return Side::Bottom;
  return Side::Top;
}

Eigen::Vector2d Mesh::edge_normal(int e) const {
  const auto& ev = edges_[e].vertices;
  return rotate_cw((vertices_[ev[1]] - vertices_[ev[0]]).normalized());
}

double Mesh::edge_length(int e) const {
  const auto& ev = edges_[e].vertices;
  return (vertices_[ev[1]] - vertices_[ev[0]]).norm();
}

double Mesh::cell_area(int c) const {
  const auto& v = cells_[c].vertices;
  const Eigen::Vector2d d1 = vertices_[v[1]] - vertices_[v[0]];
  const Eigen::Vector2d d2 = vertices_[v[2]] - vertices_[v[0]];
  return 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
}

Eigen::Vector2d Mesh::cell_centroid(int c) const {
  const auto& v = cells_[c].vertices;
  return (vertices_[v[0]] + vertices_[v[1]] + vertices_[v[2]]) / 3.0;
}

double Mesh::cell_diameter(int c) const {
  const auto& v = cells_[c].vertices;
  double d = 0.0;
  for (int i = 0; i < 3; ++i)
    d = std::max(d, (vertices_[v[(i + 1) % 3]] - vertices_[v[i]]).norm());
  return d;
}

FacetGeometry Mesh::facet_geometry(int e) const {
  const auto& ev = edges_[e].vertices;
  const Eigen::Vector2d a = vertices_[ev[0]];
  const Eigen::Vector2d b = vertices_[ev[1]];

  Eigen::Vector2d normal = edge_normal(e);
  const int first = edge_cells_[e][0];
  const auto& ce = cell_edges_[first];
  int li = 0;
  while (ce[li] != e) ++li;
  if (cell_edge_signs_[first][li] < 0) normal = -normal;

  return {(b - a).norm(), normal, 0.5 * (a + b)};
}

void Mesh::dump(std::ostream& os) const {
  os << num_vertices() << " vertices\n";
  for (const auto& p : vertices_) os << p.x() << " " << p.y() << "\n";
  os << num_cells() << " cells\n";
  for (const auto& c : cells_)
    os << c.vertices[0] << " " << c.vertices[1] << " " << c.vertices[2] << "\n";
}

}  // namespace hdivprec
