#include "hdivprec/precond.hpp"

#include <stdexcept>

namespace hdivprec {

Block Block::inverse_of(const SparseMatrix& norm) {
  if (norm.rows() != norm.cols()) throw std::invalid_argument("Block::inverse_of: square required");
  Block b;
  b.size_ = static_cast<int>(norm.rows());
  b.norm_ = std::make_shared<SparseMatrix>(norm);
  b.factor_ = std::make_shared<SpdFactorization>(factor_spd(norm));
  return b;
}

Block Block::sum_of_inverses(const std::vector<DenseMatrix>& terms,
                             const std::vector<int>& nullities) {
  if (terms.empty() || terms.size() != nullities.size())
    throw std::invalid_argument("Block::sum_of_inverses: one nullity per term required");
  const int n = static_cast<int>(terms.front().rows());
  DenseMatrix apply = DenseMatrix::Zero(n, n);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].rows() != n || terms[i].cols() != n)
      throw std::invalid_argument("Block::sum_of_inverses: size mismatch");
    apply += spd_pseudo_inverse(terms[i], nullities[i]);
  }
  Block b;
  b.size_ = n;
  b.apply_dense_ = std::make_shared<DenseMatrix>(apply);
  // The sum of an SPD inverse and PSD pseudo-inverses is SPD, so the norm it
  // realizes is its plain inverse.
  Eigen::LLT<DenseMatrix> llt(apply);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Block::sum_of_inverses: apply operator is not positive definite");
  b.norm_dense_ = std::make_shared<DenseMatrix>(llt.solve(DenseMatrix::Identity(n, n)));
  return b;
}

Vector Block::apply(const Vector& v) const {
  if (apply_dense_) return (*apply_dense_) * v;
  return factor_->solve(v);
}

void Block::add_norm_to(DenseMatrix& target, int offset) const {
  if (norm_dense_) {
    // symmetrize away the factorization round-off
    target.block(offset, offset, size_, size_) =
        0.5 * (*norm_dense_ + norm_dense_->transpose());
    return;
  }
  for (int k = 0; k < norm_->outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(*norm_, k); it; ++it)
      target(offset + it.row(), offset + it.col()) = it.value();
}

DenseMatrix Block::norm_matrix() const {
  DenseMatrix out = DenseMatrix::Zero(size_, size_);
  add_norm_to(out, 0);
  return out;
}

BlockPreconditioner::BlockPreconditioner(std::vector<Block> blocks)
    : blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) size_ += b.size();
}

Vector BlockPreconditioner::apply(const Vector& v) const {
  if (v.size() != size_) throw std::invalid_argument("BlockPreconditioner::apply: size mismatch");
  Vector out(size_);
  int off = 0;
  for (const auto& b : blocks_) {
    out.segment(off, b.size()) = b.apply(v.segment(off, b.size()));
    off += b.size();
  }
  return out;
}

DenseMatrix BlockPreconditioner::norm_matrix() const {
  DenseMatrix out = DenseMatrix::Zero(size_, size_);
  int off = 0;
  for (const auto& b : blocks_) {
    b.add_norm_to(out, off);
    off += b.size();
  }
  return out;
}

const char* to_string(PressureMode m) {
  return m == PressureMode::Dg ? "dg" : "exact-schur";
}

BlockPreconditioner darcy_b1(const DarcySystem& sys) {
  const auto& rt0 = sys.velocity_dofs;
  SparseMatrix divdiv =
      restrict_to_free(assemble_divdiv(sys.mesh, rt0, sys.field), rt0, rt0);
  SparseMatrix velocity_norm = sys.velocity_mass + divdiv;

  SparseMatrix pressure_norm;
  if (sys.field.is_scalar()) {
    pressure_norm = assemble_p0_mass_weighted(sys.mesh, sys.pressure_dofs, sys.field);
  } else {
    const double k = sys.field.tensor_pressure_scalar();
    pressure_norm = SparseMatrix(k * assemble_p0_mass(sys.mesh, sys.pressure_dofs));
  }
  return BlockPreconditioner(
      {Block::inverse_of(velocity_norm), Block::inverse_of(pressure_norm)});
}

BlockPreconditioner darcy_b2(const DarcySystem& sys, PressureMode mode,
                             SideSet pressure_dirichlet) {
  const auto& rt0 = sys.velocity_dofs;
  SparseMatrix divdiv = restrict_to_free(assemble_divdiv(sys.mesh, rt0), rt0, rt0);
  SparseMatrix velocity_norm = sys.velocity_mass + divdiv;

  DenseMatrix mp = dense(assemble_p0_mass(sys.mesh, sys.pressure_dofs));
  DenseMatrix s;
  int s_nullity = 0;
  if (mode == PressureMode::Dg) {
    // -div(K grad_h); the tensor case uses the scalar k = 1 / sum_i lambda_i^-1
    const ConductivityField dg_field =
        sys.field.is_scalar()
            ? sys.field
            : ConductivityField::constant(sys.field.tensor_pressure_scalar());
    s = dense(assemble_dg_laplacian(sys.mesh, sys.pressure_dofs, dg_field,
                                    pressure_dirichlet));
    s_nullity = pressure_dirichlet.empty() ? 1 : 0;
  } else {
    // exact Schur complement B A^-1 B^T on the eliminated system
    const SpdFactorization mass_factor = factor_spd(sys.velocity_mass);
    DenseMatrix bt = DenseMatrix(sys.div.transpose());
    DenseMatrix x(bt.rows(), bt.cols());
    for (Eigen::Index j = 0; j < bt.cols(); ++j) x.col(j) = mass_factor.solve(bt.col(j));
    s = sys.div * x;
    s = 0.5 * (s + s.transpose());
    s_nullity = sys.kernel_dim();
  }
  return BlockPreconditioner({Block::inverse_of(velocity_norm),
                              Block::sum_of_inverses({mp, s}, {0, s_nullity})});
}

const char* to_string(BiotPrecondKind k) {
  switch (k) {
    case BiotPrecondKind::B1: return "B1";
    case BiotPrecondKind::B2: return "B2";
    case BiotPrecondKind::B1K: return "B1K";
    case BiotPrecondKind::B2K: return "B2K";
  }
  return "?";
}

BiotPrecondKind biot_precond_kind_from_string(const std::string& s) {
  if (s == "B1") return BiotPrecondKind::B1;
  if (s == "B2") return BiotPrecondKind::B2;
  if (s == "B1K") return BiotPrecondKind::B1K;
  if (s == "B2K") return BiotPrecondKind::B2K;
  throw std::invalid_argument("unknown Biot preconditioner: " + s);
}

BlockPreconditioner biot_precond(const BiotSystem& sys, BiotPrecondKind kind) {
  const auto& rt0 = sys.flux_dofs;
  const double k = sys.conductivity;

  SparseMatrix m = restrict_to_free(
      assemble_velocity_mass(sys.mesh, rt0, ConductivityField::constant(1.0)), rt0, rt0);
  SparseMatrix d = restrict_to_free(assemble_divdiv(sys.mesh, rt0), rt0, rt0);

  const bool rescaled_div = kind == BiotPrecondKind::B1 || kind == BiotPrecondKind::B1K;
  SparseMatrix flux_norm =
      rescaled_div ? SparseMatrix((m + d) / k) : SparseMatrix(m / k + d);

  const bool scaled_pressure = kind == BiotPrecondKind::B1K || kind == BiotPrecondKind::B2K;
  SparseMatrix mp = assemble_p0_mass(sys.mesh, sys.pressure_dofs);
  SparseMatrix pressure_norm = scaled_pressure ? SparseMatrix(k * mp) : mp;

  return BlockPreconditioner({Block::inverse_of(sys.elasticity),
                              Block::inverse_of(flux_norm),
                              Block::inverse_of(pressure_norm)});
}

}  // namespace hdivprec
