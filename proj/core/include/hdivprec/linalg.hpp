#pragma once

#include <memory>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace hdivprec {

using SparseMatrix = Eigen::SparseMatrix<double>;
using DenseMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

DenseMatrix dense(const SparseMatrix& a);

/// Cholesky factorization of a symmetric positive definite matrix.
/// Construction throws std::runtime_error if a nonpositive pivot is hit.
class SpdFactorization {
public:
  Vector solve(const Vector& rhs) const;
  int size() const { return size_; }

  friend SpdFactorization factor_spd(const SparseMatrix& a);
  friend SpdFactorization factor_spd(const DenseMatrix& a);

private:
  SpdFactorization() = default;
  int size_ = 0;
  std::shared_ptr<const void> impl_;
  Vector (*solve_fn_)(const void*, const Vector&) = nullptr;
};

SpdFactorization factor_spd(const SparseMatrix& a);
SpdFactorization factor_spd(const DenseMatrix& a);

/// All eigenvalues of A x = lambda N x, ascending, for symmetric A and SPD N.
/// Reduces via the Cholesky factor of N, so the result is real by
/// construction. Throws std::invalid_argument if N is not positive definite.
std::vector<double> generalized_eigs(const DenseMatrix& a, const DenseMatrix& n);

/// Eigenvalues of a symmetric matrix, ascending.
std::vector<double> symmetric_eigs(const DenseMatrix& a);

/// Pseudo-inverse of a symmetric positive semidefinite matrix whose kernel
/// dimension is known. Eigenvalues below rel_tol * lambda_max are treated as
/// zero; their count must equal expected_nullity or a std::runtime_error is
/// thrown. Noticeably negative eigenvalues are rejected.
DenseMatrix spd_pseudo_inverse(const DenseMatrix& a, int expected_nullity,
                               double rel_tol = 1e-10);

}  // namespace hdivprec
