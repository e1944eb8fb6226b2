#include "hdivprec/forms.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace hdivprec {

namespace {

// 3-point edge-midpoint rule, exact for quadratics; weight = area / 3 each.
constexpr std::array<std::array<double, 3>, 3> kQuadPoints = {{
    {0.5, 0.5, 0.0},
    {0.0, 0.5, 0.5},
    {0.5, 0.0, 0.5},
}};

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(int rows, int cols, const Triplets& t) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(t.begin(), t.end());
  a.makeCompressed();
  return a;
}

void require_kind(const DofMap& map, SpaceKind kind, const char* who) {
  if (map.kind() != kind)
    throw std::invalid_argument(std::string(who) + ": dof map is not " + to_string(kind));
}

}  // namespace

SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMap& rt0,
                                    const ConductivityField& field) {
  require_kind(rt0, SpaceKind::RT0, "assemble_velocity_mass");
  Triplets trip;
  trip.reserve(9 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(mesh, c);
    const Eigen::Matrix2d kinv = field.cell_value(mesh, c).inverse();
    const auto& dofs = rt0.cell_dofs(c);
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const auto& lambda : kQuadPoints) {
      const Eigen::Vector2d x = g.point(lambda);
      std::array<Eigen::Vector2d, 3> phi;
      for (int i = 0; i < 3; ++i) phi[i] = dofs[i].sign * rt0_value(g, i, x);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          local(i, j) += g.area / 3.0 * phi[i].dot(kinv * phi[j]);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trip.emplace_back(dofs[i].index, dofs[j].index, local(i, j));
  }
  return from_triplets(rt0.total_dofs(), rt0.total_dofs(), trip);
}

SparseMatrix assemble_div(const Mesh& mesh, const DofMap& rt0, const DofMap& p0) {
  require_kind(rt0, SpaceKind::RT0, "assemble_div");
  require_kind(p0, SpaceKind::P0, "assemble_div");
  Triplets trip;
  trip.reserve(3 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(mesh, c);
    const auto& dofs = rt0.cell_dofs(c);
    const int row = p0.cell_dofs(c)[0].index;
    for (int i = 0; i < 3; ++i)
      trip.emplace_back(row, dofs[i].index, dofs[i].sign * g.edge_length[i]);
  }
  return from_triplets(p0.total_dofs(), rt0.total_dofs(), trip);
}

SparseMatrix assemble_divdiv(const Mesh& mesh, const DofMap& rt0,
                             const std::optional<ConductivityField>& weight) {
  require_kind(rt0, SpaceKind::RT0, "assemble_divdiv");
  Triplets trip;
  trip.reserve(9 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(mesh, c);
    const double w = weight ? 0.5 * weight->cell_value(mesh, c).inverse().trace() : 1.0;
    const auto& dofs = rt0.cell_dofs(c);
    for (int i = 0; i < 3; ++i) {
      const double di = dofs[i].sign * rt0_div(g, i);
      for (int j = 0; j < 3; ++j) {
        const double dj = dofs[j].sign * rt0_div(g, j);
        trip.emplace_back(dofs[i].index, dofs[j].index, w * g.area * di * dj);
      }
    }
  }
  return from_triplets(rt0.total_dofs(), rt0.total_dofs(), trip);
}

SparseMatrix assemble_p0_mass(const Mesh& mesh, const DofMap& p0) {
  require_kind(p0, SpaceKind::P0, "assemble_p0_mass");
  Triplets trip;
  for (int c = 0; c < mesh.num_cells(); ++c)
    trip.emplace_back(p0.cell_dofs(c)[0].index, p0.cell_dofs(c)[0].index, mesh.cell_area(c));
  return from_triplets(p0.total_dofs(), p0.total_dofs(), trip);
}

SparseMatrix assemble_p0_mass_weighted(const Mesh& mesh, const DofMap& p0,
                                       const ConductivityField& field) {
  require_kind(p0, SpaceKind::P0, "assemble_p0_mass_weighted");
  Triplets trip;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const int d = p0.cell_dofs(c)[0].index;
    trip.emplace_back(d, d, field.scalar_cell_value(mesh, c) * mesh.cell_area(c));
  }
  return from_triplets(p0.total_dofs(), p0.total_dofs(), trip);
}

SparseMatrix assemble_dg_laplacian(const Mesh& mesh, const DofMap& p0,
                                   const ConductivityField& field, SideSet dirichlet) {
  require_kind(p0, SpaceKind::P0, "assemble_dg_laplacian");
  if (!field.is_scalar())
    throw std::invalid_argument("assemble_dg_laplacian: tensor fields not supported");

  Triplets trip;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const double len = mesh.edge_length(e);
    const auto& cells = mesh.edge_cells(e);
    if (!mesh.is_boundary_edge(e)) {
      const double avg_h = 0.5 * (mesh.cell_diameter(cells[0]) + mesh.cell_diameter(cells[1]));
      const double w = field.facet_harmonic_mean(mesh, e) / avg_h * len;
      const int r0 = p0.cell_dofs(cells[0])[0].index;
      const int r1 = p0.cell_dofs(cells[1])[0].index;
      trip.emplace_back(r0, r0, w);
      trip.emplace_back(r1, r1, w);
      trip.emplace_back(r0, r1, -w);
      trip.emplace_back(r1, r0, -w);
    } else if (dirichlet.contains(mesh.boundary_side(e))) {
      const double w =
          field.scalar_cell_value(mesh, cells[0]) / mesh.cell_diameter(cells[0]) * len;
      const int r = p0.cell_dofs(cells[0])[0].index;
      trip.emplace_back(r, r, w);
    }
  }
  return from_triplets(p0.total_dofs(), p0.total_dofs(), trip);
}

SparseMatrix assemble_elasticity(const Mesh& mesh, const DofMap& p2vec) {
  require_kind(p2vec, SpaceKind::P2Vec, "assemble_elasticity");
  Triplets trip;
  trip.reserve(144 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(mesh, c);
    const auto& dofs = p2vec.cell_dofs(c);  // 12: [comp 0 nodes 0..5, comp 1 nodes 0..5]
    Eigen::Matrix<double, 12, 12> local = Eigen::Matrix<double, 12, 12>::Zero();
    for (const auto& lambda : kQuadPoints) {
      const auto grad = p2_gradients(g, lambda);
      std::array<Eigen::Matrix2d, 12> eps;
      for (int a = 0; a < 12; ++a) {
        const int comp = a / 6, node = a % 6;
        Eigen::Matrix2d gu = Eigen::Matrix2d::Zero();
        gu.row(comp) = grad[node].transpose();
        eps[a] = 0.5 * (gu + gu.transpose());
      }
      for (int a = 0; a < 12; ++a)
        for (int b = 0; b < 12; ++b)
          local(a, b) += g.area / 3.0 * 2.0 * (eps[a].array() * eps[b].array()).sum();
    }
    for (int a = 0; a < 12; ++a)
      for (int b = 0; b < 12; ++b)
        trip.emplace_back(dofs[a].index, dofs[b].index, local(a, b));
  }
  return from_triplets(p2vec.total_dofs(), p2vec.total_dofs(), trip);
}

SparseMatrix assemble_coupling(const Mesh& mesh, const DofMap& p2vec, const DofMap& p0) {
  require_kind(p2vec, SpaceKind::P2Vec, "assemble_coupling");
  require_kind(p0, SpaceKind::P0, "assemble_coupling");
  Triplets trip;
  trip.reserve(12 * mesh.num_cells());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(mesh, c);
    const auto& dofs = p2vec.cell_dofs(c);
    const int row = p0.cell_dofs(c)[0].index;
    std::array<double, 12> local{};
    for (const auto& lambda : kQuadPoints) {
      const auto grad = p2_gradients(g, lambda);
      for (int a = 0; a < 12; ++a) {
        const int comp = a / 6, node = a % 6;
        local[a] += g.area / 3.0 * grad[node][comp];  // div of basis a
      }
    }
    for (int a = 0; a < 12; ++a) trip.emplace_back(row, dofs[a].index, local[a]);
  }
  return from_triplets(p0.total_dofs(), p2vec.total_dofs(), trip);
}

SparseMatrix restrict_to_free(const SparseMatrix& a, const DofMap& rows, const DofMap& cols) {
  if (a.rows() != rows.total_dofs() || a.cols() != cols.total_dofs())
    throw std::invalid_argument("restrict_to_free: size mismatch");
  Triplets trip;
  trip.reserve(a.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator it(a, k); it; ++it) {
      const int r = rows.free_index(static_cast<int>(it.row()));
      const int c = cols.free_index(static_cast<int>(it.col()));
      if (r >= 0 && c >= 0) trip.emplace_back(r, c, it.value());
    }
  }
  return from_triplets(rows.num_free(), cols.num_free(), trip);
}

namespace {

// Assembles the symmetric saddle matrix [[A, B^T], [B, 0]] from eliminated blocks.
SparseMatrix saddle_2x2(const SparseMatrix& a, const SparseMatrix& b) {
  const int nu = static_cast<int>(a.rows());
  const int np = static_cast<int>(b.rows());
  Triplets trip;
  trip.reserve(a.nonZeros() + 2 * b.nonZeros());
  for (int k = 0; k < a.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(a, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
  for (int k = 0; k < b.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(b, k); it; ++it) {
      const int r = static_cast<int>(it.row());
      const int c = static_cast<int>(it.col());
      trip.emplace_back(nu + r, c, it.value());
      trip.emplace_back(c, nu + r, it.value());
    }
  return from_triplets(nu + np, nu + np, trip);
}

}  // namespace

DarcySystem build_darcy_system(const Mesh& mesh, const ConductivityField& field,
                               SideSet flux_essential) {
  DofMap rt0 = build_dofmap(mesh, SpaceKind::RT0, flux_essential);
  DofMap p0 = build_dofmap(mesh, SpaceKind::P0, SideSet::none());

  SparseMatrix mass = restrict_to_free(assemble_velocity_mass(mesh, rt0, field), rt0, rt0);
  SparseMatrix div = restrict_to_free(assemble_div(mesh, rt0, p0), p0, rt0);

  DarcySystem sys{mesh,          field, flux_essential,         std::move(rt0),
                  std::move(p0), mass,  div,                    saddle_2x2(mass, div)};
  return sys;
}

BiotSystem build_biot_system(const Mesh& mesh, double conductivity) {
  const SideSet gamma_d = {Side::Left, Side::Right, Side::Bottom};
  DofMap p2 = build_dofmap(mesh, SpaceKind::P2Vec, gamma_d);
  DofMap rt0 = build_dofmap(mesh, SpaceKind::RT0, gamma_d);
  DofMap p0 = build_dofmap(mesh, SpaceKind::P0, SideSet::none());

  const auto field = ConductivityField::constant(conductivity);
  SparseMatrix ae = restrict_to_free(assemble_elasticity(mesh, p2), p2, p2);
  SparseMatrix mv = restrict_to_free(assemble_velocity_mass(mesh, rt0, field), rt0, rt0);
  SparseMatrix be = SparseMatrix(-restrict_to_free(assemble_coupling(mesh, p2, p0), p0, p2));
  SparseMatrix bv = SparseMatrix(-restrict_to_free(assemble_div(mesh, rt0, p0), p0, rt0));

  const int nd = static_cast<int>(ae.rows());
  const int nf = static_cast<int>(mv.rows());
  const int np = static_cast<int>(be.rows());

  Triplets trip;
  auto add_block = [&trip](const SparseMatrix& m, int roff, int coff, bool with_transpose) {
    for (int k = 0; k < m.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(m, k); it; ++it) {
        const int r = static_cast<int>(it.row());
        const int c = static_cast<int>(it.col());
        trip.emplace_back(roff + r, coff + c, it.value());
        if (with_transpose) trip.emplace_back(coff + c, roff + r, it.value());
      }
  };
  add_block(ae, 0, 0, false);
  add_block(mv, nd, nd, false);
  add_block(be, nd + nf, 0, true);
  add_block(bv, nd + nf, nd, true);

  BiotSystem sys{mesh,
                 conductivity,
                 std::move(p2),
                 std::move(rt0),
                 std::move(p0),
                 std::move(ae),
                 std::move(mv),
                 std::move(be),
                 std::move(bv),
                 from_triplets(nd + nf + np, nd + nf + np, trip)};
  return sys;
}

}  // namespace hdivprec
