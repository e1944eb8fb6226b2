#pragma once

#include <memory>
#include <string>
#include <vector>

#include "hdivprec/forms.hpp"
#include "hdivprec/linalg.hpp"

namespace hdivprec {

/// One diagonal block of a block preconditioner. Either the inverse of an
/// SPD norm matrix, or a sum of (pseudo-)inverses realizing blocks of the
/// form I^-1 + S^-1; singular summands are inverted on the orthogonal
/// complement of their kernel, whose dimension must be declared.
class Block {
public:
  static Block inverse_of(const SparseMatrix& norm);
  static Block sum_of_inverses(const std::vector<DenseMatrix>& terms,
                               const std::vector<int>& nullities);

  int size() const { return size_; }
  Vector apply(const Vector& v) const;
  /// Writes this block's norm matrix (the inverse of apply) into target at
  /// the given diagonal offset.
  void add_norm_to(DenseMatrix& target, int offset) const;
  DenseMatrix norm_matrix() const;

private:
  Block() = default;
  int size_ = 0;
  // inverse_of mode
  std::shared_ptr<const SparseMatrix> norm_;
  std::shared_ptr<const SpdFactorization> factor_;
  // sum_of_inverses mode
  std::shared_ptr<const DenseMatrix> apply_dense_;
  std::shared_ptr<const DenseMatrix> norm_dense_;
};

/// Block-diagonal preconditioner conforming to a saddle system partition.
class BlockPreconditioner {
public:
  explicit BlockPreconditioner(std::vector<Block> blocks);

  int size() const { return size_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const Block& block(int i) const { return blocks_[i]; }

  Vector apply(const Vector& v) const;
  /// Dense block-diagonal norm matrix (the inverse of apply).
  DenseMatrix norm_matrix() const;

private:
  std::vector<Block> blocks_;
  int size_ = 0;
};

enum class PressureMode { Dg, ExactSchur };
const char* to_string(PressureMode m);

/// B1 = diag( (K^-1(I - grad div))^-1, (K I)^-1 ), with the per-cell weighted
/// forms for the jump variant and the variational tensor generalization
/// (K^-1 I - grad div K^-1)^-1 with pressure block (k I)^-1, k = K0/(1+K0).
BlockPreconditioner darcy_b1(const DarcySystem& sys);

/// B2 = diag( (K^-1 I - grad div)^-1, I^-1 + S^-1 ) where S realizes
/// -div(K grad): the weighted interior-penalty Laplacian in dg mode (the
/// scalar k replaces the tensor), or the exact pressure Schur complement
/// B A^-1 B^T. pressure_dirichlet selects the sides carrying a pressure
/// Dirichlet term in the dg operator.
BlockPreconditioner darcy_b2(const DarcySystem& sys, PressureMode mode,
                             SideSet pressure_dirichlet);

enum class BiotPrecondKind { B1, B2, B1K, B2K };
const char* to_string(BiotPrecondKind k);
BiotPrecondKind biot_precond_kind_from_string(const std::string& s);

/// Biot preconditioners: displacement block (2 eps, eps)^-1 throughout; flux
/// block (K^-1(M + D))^-1 for B1/B1K and (K^-1 M + D)^-1 for B2/B2K;
/// pressure block M_p^-1 for B1/B2 and (K M_p)^-1 for B1K/B2K.
BlockPreconditioner biot_precond(const BiotSystem& sys, BiotPrecondKind kind);

}  // namespace hdivprec
