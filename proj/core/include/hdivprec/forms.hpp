#pragma once

#include <optional>

#include "hdivprec/conductivity.hpp"
#include "hdivprec/linalg.hpp"
#include "hdivprec/mesh.hpp"
#include "hdivprec/spaces.hpp"

namespace hdivprec {

// All assemble_* functions return matrices over the full dof range of their
// maps; essential dofs are eliminated afterwards with restrict_to_free.
// Quadrature is the 3-point edge-midpoint rule, exact for quadratics, which
// covers every integrand here (coefficients are constant per cell).

/// Velocity mass (K^-1 u, v) on RT0.
SparseMatrix assemble_velocity_mass(const Mesh& mesh, const DofMap& rt0,
                                    const ConductivityField& field);

/// Divergence coupling (div u, q), pressure rows by velocity columns.
/// Entries are sign * |e| exactly.
SparseMatrix assemble_div(const Mesh& mesh, const DofMap& rt0, const DofMap& p0);

/// (div u, div v) on RT0. With a weight field this is the variational form
/// (div(K^-1 u), div v): for cellwise-constant K and RT0 fields
/// div(K^-1 u) = tr(K^-1)/2 * div u, so entries pick up tr(K_T^-1)/2 per cell
/// and the form stays symmetric.
SparseMatrix assemble_divdiv(const Mesh& mesh, const DofMap& rt0,
                             const std::optional<ConductivityField>& weight = std::nullopt);

/// Pressure mass, diagonal with entries |T|.
SparseMatrix assemble_p0_mass(const Mesh& mesh, const DofMap& p0);

/// Conductivity-weighted pressure mass, diagonal with entries K_T * |T|
/// (scalar variants only).
SparseMatrix assemble_p0_mass_weighted(const Mesh& mesh, const DofMap& p0,
                                       const ConductivityField& field);

/// Interior-penalty Laplacian on piecewise constants: the volume term
/// vanishes, interior facets contribute 1/avg(h) * harm(K) * |e| jump
/// couplings and facets on dirichlet sides contribute K/h * |e| to the
/// incident diagonal, with h the cell diameter. Symmetric positive
/// semidefinite; kernel = constants iff dirichlet is empty. Throws for
/// tensor fields.
SparseMatrix assemble_dg_laplacian(const Mesh& mesh, const DofMap& p0,
                                   const ConductivityField& field, SideSet dirichlet);

/// Linear elasticity (2 eps(u), eps(v)) on vector P2.
SparseMatrix assemble_elasticity(const Mesh& mesh, const DofMap& p2vec);

/// Divergence coupling (div w, q) for P2 displacements against P0.
SparseMatrix assemble_coupling(const Mesh& mesh, const DofMap& p2vec, const DofMap& p0);

/// Drops constrained rows and columns (symmetric elimination with
/// homogeneous values).
SparseMatrix restrict_to_free(const SparseMatrix& a, const DofMap& rows, const DofMap& cols);

/// Assembled, eliminated mixed Darcy saddle system
///   [ A   B^T ] with A = (K^-1 u, v),  B = (div u, q).
///   [ B   0   ]
struct DarcySystem {
  Mesh mesh;
  ConductivityField field;
  SideSet flux_essential;
  DofMap velocity_dofs;  // RT0, constrained on flux_essential
  DofMap pressure_dofs;  // P0
  SparseMatrix velocity_mass;  // A, eliminated
  SparseMatrix div;            // B, eliminated columns
  SparseMatrix full;           // symmetric indefinite saddle matrix

  int n_velocity() const { return velocity_dofs.num_free(); }
  int n_pressure() const { return pressure_dofs.total_dofs(); }
  int size() const { return n_velocity() + n_pressure(); }
  /// Dimension of the pressure kernel: 1 when the flux is constrained on the
  /// whole boundary, 0 otherwise.
  int kernel_dim() const { return flux_essential == SideSet::all() ? 1 : 0; }
};

DarcySystem build_darcy_system(const Mesh& mesh, const ConductivityField& field,
                               SideSet flux_essential);

/// Assembled, eliminated three-field Biot system
///   [ Ae  0   Be^T ]   Ae = (2 eps(u), eps(w)),  Mv = (K^-1 v, s),
///   [ 0   Mv  Bv^T ]   Be = -(div u, q),         Bv = -(div v, q).
///   [ Be  Bv  0    ]
/// Displacement and flux are constrained on the left, right and bottom sides.
struct BiotSystem {
  Mesh mesh;
  double conductivity;
  DofMap displacement_dofs;  // P2Vec
  DofMap flux_dofs;          // RT0
  DofMap pressure_dofs;      // P0
  SparseMatrix elasticity;     // Ae, eliminated
  SparseMatrix flux_mass;      // Mv, eliminated
  SparseMatrix div_disp;       // Be, eliminated columns
  SparseMatrix div_flux;       // Bv, eliminated columns
  SparseMatrix full;

  int n_displacement() const { return displacement_dofs.num_free(); }
  int n_flux() const { return flux_dofs.num_free(); }
  int n_pressure() const { return pressure_dofs.total_dofs(); }
  int size() const { return n_displacement() + n_flux() + n_pressure(); }
};

BiotSystem build_biot_system(const Mesh& mesh, double conductivity);

}  // namespace hdivprec
