#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "hdivprec/mesh.hpp"

namespace hdivprec {

enum class SpaceKind {
  RT0,    // lowest-order Raviart-Thomas, one dof per edge
  P0,     // piecewise constants, one dof per cell
  P2Vec,  // continuous vector-valued quadratics, two dofs per vertex and edge midpoint
};

const char* to_string(SpaceKind k);

struct CellDof {
  int index;    // global dof index
  double sign;  // +1 or -1 (RT0 orientation); +1 for P0 and P2Vec
};

/// Degree-of-freedom map for one finite element space on a mesh.
///
/// RT0 dofs are normal fluxes along the global edge normals, normalized so
/// the basis function has unit normal trace on its own edge. P2Vec dofs are
/// interleaved per node (x component first), nodes ordered vertices then
/// edge midpoints.
class DofMap {
public:
  SpaceKind kind() const { return kind_; }
  int total_dofs() const { return total_; }

  const std::vector<CellDof>& cell_dofs(int c) const { return cell_dofs_[c]; }

  bool is_constrained(int dof) const { return free_index_[dof] < 0; }
  int num_constrained() const { return total_ - num_free_; }
  /// Compact index among unconstrained dofs, or -1 if constrained.
  int free_index(int dof) const { return free_index_[dof]; }
  int num_free() const { return num_free_; }
  /// Ascending list of unconstrained global dofs.
  const std::vector<int>& free_dofs() const { return free_dofs_; }

  friend DofMap build_dofmap(const Mesh&, SpaceKind, SideSet);

private:
  SpaceKind kind_ = SpaceKind::P0;
  int total_ = 0;
  int num_free_ = 0;
  std::vector<std::vector<CellDof>> cell_dofs_;
  std::vector<int> free_index_;
  std::vector<int> free_dofs_;
};

/// Builds the dof map, constraining dofs supported on boundary edges whose
/// side is in essential_bc (the edge dof for RT0; both components of vertex
/// and midpoint nodes for P2Vec). Throws for P0 with nonempty essential_bc.
DofMap build_dofmap(const Mesh& mesh, SpaceKind kind, SideSet essential_bc);

/// Per-cell geometry used to evaluate reference bases.
struct CellGeometry {
  std::array<Eigen::Vector2d, 3> p;            // vertices, counterclockwise
  double area;
  std::array<Eigen::Vector2d, 3> grad_lambda;  // barycentric gradients
  std::array<double, 3> edge_length;           // edge i opposite vertex i

  static CellGeometry from(const Mesh& mesh, int cell);
  Eigen::Vector2d point(const std::array<double, 3>& lambda) const;
};

/// RT0 basis function for edge i (opposite vertex i), oriented outward,
/// with unit normal trace on its own edge: phi_i = |e_i|/(2A) (x - p_i).
Eigen::Vector2d rt0_value(const CellGeometry& g, int i, const Eigen::Vector2d& x);
/// div phi_i = |e_i| / A, constant on the cell.
double rt0_div(const CellGeometry& g, int i);

/// Scalar P2 Lagrange basis at barycentric coordinates; nodes ordered
/// [vertex 0..2, midpoint of edge 0..2] with edge i opposite vertex i.
std::array<double, 6> p2_values(const std::array<double, 3>& lambda);
std::array<Eigen::Vector2d, 6> p2_gradients(const CellGeometry& g,
                                            const std::array<double, 3>& lambda);

}  // namespace hdivprec
