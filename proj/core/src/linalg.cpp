#include "hdivprec/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <lapacke.h>

namespace hdivprec {

DenseMatrix dense(const SparseMatrix& a) { return DenseMatrix(a); }

namespace {

void check_square(const DenseMatrix& a, const char* who) {
  if (a.rows() != a.cols()) throw std::invalid_argument(std::string(who) + ": square matrix required");
}

void check_symmetric(const DenseMatrix& a, const char* who) {
  const double scale = a.cwiseAbs().maxCoeff();
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(scale, 1.0))
    throw std::invalid_argument(std::string(who) + ": symmetric matrix required");
}

}  // namespace

Vector SpdFactorization::solve(const Vector& rhs) const { return solve_fn_(impl_.get(), rhs); }

SpdFactorization factor_spd(const SparseMatrix& a) {
  auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(a);
  if (llt->info() != Eigen::Success)
    throw std::runtime_error("factor_spd: matrix is not positive definite");
  SpdFactorization f;
  f.size_ = static_cast<int>(a.rows());
  f.impl_ = llt;
  f.solve_fn_ = [](const void* p, const Vector& b) -> Vector {
    return static_cast<const Eigen::SimplicialLLT<SparseMatrix>*>(p)->solve(b);
  };
  return f;
}

SpdFactorization factor_spd(const DenseMatrix& a) {
  auto llt = std::make_shared<Eigen::LLT<DenseMatrix>>(a);
  if (llt->info() != Eigen::Success)
    throw std::runtime_error("factor_spd: matrix is not positive definite");
  SpdFactorization f;
  f.size_ = static_cast<int>(a.rows());
  f.impl_ = llt;
  f.solve_fn_ = [](const void* p, const Vector& b) -> Vector {
    return static_cast<const Eigen::LLT<DenseMatrix>*>(p)->solve(b);
  };
  return f;
}

std::vector<double> generalized_eigs(const DenseMatrix& a, const DenseMatrix& n) {
  check_square(a, "generalized_eigs");
  check_square(n, "generalized_eigs");
  if (a.rows() != n.rows())
    throw std::invalid_argument("generalized_eigs: size mismatch");
  check_symmetric(a, "generalized_eigs");
  check_symmetric(n, "generalized_eigs");

  const lapack_int size = static_cast<lapack_int>(a.rows());
  DenseMatrix acopy = a, ncopy = n;
  std::vector<double> w(size);
  const lapack_int info =
      LAPACKE_dsygvd(LAPACK_COL_MAJOR, 1, 'N', 'L', size, acopy.data(), size,
                     ncopy.data(), size, w.data());
  if (info > size)
    throw std::invalid_argument("generalized_eigs: N is not positive definite");
  if (info != 0) throw std::runtime_error("generalized_eigs: eigensolver failed to converge");
  return w;
}

std::vector<double> symmetric_eigs(const DenseMatrix& a) {
  check_square(a, "symmetric_eigs");
  check_symmetric(a, "symmetric_eigs");
  const lapack_int size = static_cast<lapack_int>(a.rows());
  DenseMatrix acopy = a;
  std::vector<double> w(size);
  const lapack_int info =
      LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', size, acopy.data(), size, w.data());
  if (info != 0) throw std::runtime_error("symmetric_eigs: eigensolver failed");
  return w;
}

DenseMatrix spd_pseudo_inverse(const DenseMatrix& a, int expected_nullity, double rel_tol) {
  check_square(a, "spd_pseudo_inverse");
  check_symmetric(a, "spd_pseudo_inverse");

  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(a);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("spd_pseudo_inverse: eigensolver failed");
  const Vector& lam = es.eigenvalues();
  const double lmax = lam.cwiseAbs().maxCoeff();
  const double tol = rel_tol * std::max(lmax, 1e-300);

  int nullity = 0;
  Vector inv_lam(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    if (lam[i] < -tol)
      throw std::runtime_error("spd_pseudo_inverse: matrix is not positive semidefinite");
    if (std::abs(lam[i]) <= tol) {
      inv_lam[i] = 0.0;
      ++nullity;
    } else {
      inv_lam[i] = 1.0 / lam[i];
    }
  }
  if (nullity != expected_nullity)
    throw std::runtime_error("spd_pseudo_inverse: kernel dimension " + std::to_string(nullity) +
                             ", expected " + std::to_string(expected_nullity));
  return es.eigenvectors() * inv_lam.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace hdivprec
