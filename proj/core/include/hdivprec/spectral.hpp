#pragma once

#include <string>
#include <vector>

#include "hdivprec/linalg.hpp"
#include "hdivprec/precond.hpp"

namespace hdivprec {

/// Spectrum of a preconditioned saddle system.
struct SpectrumReport {
  std::vector<double> eigenvalues;  // ascending, kernel modes included
  int n_filtered_null = 0;          // near-zero modes excluded from cond
  double lambda_min_abs = 0.0;
  double lambda_max_abs = 0.0;
  double cond = 0.0;
  // The generalized solve reduces via a Cholesky factor of the norm matrix,
  // so eigenvalues are real by construction; kept for reporting.
  double realness_residue = 0.0;
  // metadata, filled by the experiment driver
  std::string preconditioner;
  std::string pressure_mode;
  double conductivity = 0.0;
  double theta = 0.0;
  int h_exponent = 0;
};

/// Eigenvalues of A x = lambda N x with N the block-diagonal norm matrix of
/// the preconditioner (the inverse of its apply), near-zero modes filtered at
/// 1e-10 * max|lambda|. Throws std::runtime_error if the number of filtered
/// modes differs from expected_kernel_dim.
SpectrumReport condition_number(const SparseMatrix& system, const BlockPreconditioner& precond,
                                int expected_kernel_dim);

/// Discrete inf-sup constant: sqrt of the smallest nonzero eigenvalue of
/// (B Nu^-1 B^T) x = mu Np x. With exclude_constant_mode the single zero of
/// the all-boundary-flux layout is removed first.
double infsup_constant(const SparseMatrix& div, const SparseMatrix& velocity_norm,
                       const DenseMatrix& pressure_norm, bool exclude_constant_mode);

struct MinresResult {
  Vector solution;
  int iterations = 0;
  bool converged = false;
  double relative_residual = 0.0;  // preconditioned residual norm over initial
};

/// Preconditioned MINRES for a symmetric system with an SPD preconditioner.
/// Stops when the preconditioned residual norm drops by rtol, or at maxit
/// (reported via the converged flag, not an error).
MinresResult minres(const SparseMatrix& system, const BlockPreconditioner& precond,
                    const Vector& rhs, double rtol, int maxit);

}  // namespace hdivprec
