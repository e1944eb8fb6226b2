#include "hdivprec/spaces.hpp"

#include <stdexcept>

namespace hdivprec {

const char* to_string(SpaceKind k) {
  switch (k) {
    case SpaceKind::RT0: return "RT0";
    case SpaceKind::P0: return "P0";
    case SpaceKind::P2Vec: return "P2Vec";
  }
  return "?";
}

DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, SideSet essential_bc) {
  DofMap map;
  map.kind_ = kind;

  // boundary edges carrying an essential condition
  std::vector<char> edge_constrained(mesh.num_edges(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.is_boundary_edge(e) && essential_bc.contains(mesh.boundary_side(e)))
      edge_constrained[e] = 1;

  std::vector<char> constrained;

  switch (kind) {
    case SpaceKind::RT0: {
      map.total_ = mesh.num_edges();
      constrained.assign(map.total_, 0);
      map.cell_dofs_.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& edges = mesh.cell_edges(c);
        const auto& signs = mesh.cell_edge_signs(c);
        for (int i = 0; i < 3; ++i)
          map.cell_dofs_[c].push_back({edges[i], double(signs[i])});
      }
      for (int e = 0; e < mesh.num_edges(); ++e)
        if (edge_constrained[e]) constrained[e] = 1;
      break;
    }
    case SpaceKind::P0: {
      if (!essential_bc.empty())
        throw std::invalid_argument("build_dofmap: P0 admits no essential conditions");
      map.total_ = mesh.num_cells();
      constrained.assign(map.total_, 0);
      map.cell_dofs_.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c) map.cell_dofs_[c].push_back({c, 1.0});
      break;
    }
    case SpaceKind::P2Vec: {
      const int nv = mesh.num_vertices();
      const int nodes = nv + mesh.num_edges();
      map.total_ = 2 * nodes;
      constrained.assign(map.total_, 0);
      map.cell_dofs_.resize(mesh.num_cells());
      for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& v = mesh.cell(c).vertices;
        const auto& e = mesh.cell_edges(c);
        std::array<int, 6> node = {v[0], v[1], v[2], nv + e[0], nv + e[1], nv + e[2]};
        for (int comp = 0; comp < 2; ++comp)
          for (int i = 0; i < 6; ++i)
            map.cell_dofs_[c].push_back({2 * node[i] + comp, 1.0});
      }
      for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!edge_constrained[e]) continue;
        const auto& ev = mesh.edge(e).vertices;
        for (int comp = 0; comp < 2; ++comp) {
          constrained[2 * ev[0] + comp] = 1;
          constrained[2 * ev[1] + comp] = 1;
          constrained[2 * (nv + e) + comp] = 1;
        }
      }
      break;
    }
  }

  map.free_index_.assign(map.total_, -1);
  map.num_free_ = 0;
  for (int d = 0; d < map.total_; ++d) {
    if (!constrained[d]) {
      map.free_index_[d] = map.num_free_++;
      map.free_dofs_.push_back(d);
    }
  }
  return map;
}

CellGeometry CellGeometry::from(const Mesh& mesh, int cell) {
  CellGeometry g;
  const auto& v = mesh.cell(cell).vertices;
  for (int i = 0; i < 3; ++i) g.p[i] = mesh.vertex(v[i]);
  const Eigen::Vector2d d1 = g.p[1] - g.p[0];
  const Eigen::Vector2d d2 = g.p[2] - g.p[0];
  g.area = 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector2d e = g.p[(i + 2) % 3] - g.p[(i + 1) % 3];
    g.grad_lambda[i] = Eigen::Vector2d(-e.y(), e.x()) / (2.0 * g.area);
    g.edge_length[i] = e.norm();
  }
  return g;
}

Eigen::Vector2d CellGeometry::point(const std::array<double, 3>& lambda) const {
  return lambda[0] * p[0] + lambda[1] * p[1] + lambda[2] * p[2];
}

Eigen::Vector2d rt0_value(const CellGeometry& g, int i, const Eigen::Vector2d& x) {
  return g.edge_length[i] / (2.0 * g.area) * (x - g.p[i]);
}

double rt0_div(const CellGeometry& g, int i) { return g.edge_length[i] / g.area; }

std::array<double, 6> p2_values(const std::array<double, 3>& l) {
  return {l[0] * (2 * l[0] - 1), l[1] * (2 * l[1] - 1), l[2] * (2 * l[2] - 1),
          4 * l[1] * l[2],       4 * l[2] * l[0],       4 * l[0] * l[1]};
}

std::array<Eigen::Vector2d, 6> p2_gradients(const CellGeometry& g,
                                            const std::array<double, 3>& l) {
  std::array<Eigen::Vector2d, 6> out;
  for (int i = 0; i < 3; ++i) out[i] = (4 * l[i] - 1) * g.grad_lambda[i];
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3, k = (i + 2) % 3;
    out[3 + i] = 4 * (l[k] * g.grad_lambda[j] + l[j] * g.grad_lambda[k]);
  }
  return out;
}

}  // namespace hdivprec
