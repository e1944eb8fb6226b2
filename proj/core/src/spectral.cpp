#include "hdivprec/spectral.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hdivprec {

SpectrumReport condition_number(const SparseMatrix& system, const BlockPreconditioner& precond,
                                int expected_kernel_dim) {
  if (system.rows() != precond.size())
    throw std::invalid_argument("condition_number: system and preconditioner sizes differ");

  const DenseMatrix a = dense(system);
  const DenseMatrix n = precond.norm_matrix();

  SpectrumReport rep;
  rep.eigenvalues = generalized_eigs(a, n);

  double max_abs = 0.0;
  for (double lam : rep.eigenvalues) max_abs = std::max(max_abs, std::abs(lam));
  const double tol = 1e-10 * max_abs;

  double min_abs = max_abs;
  for (double lam : rep.eigenvalues) {
    if (std::abs(lam) <= tol) {
      ++rep.n_filtered_null;
    } else {
      min_abs = std::min(min_abs, std::abs(lam));
    }
  }
  if (rep.n_filtered_null != expected_kernel_dim)
    throw std::runtime_error("condition_number: filtered " +
                             std::to_string(rep.n_filtered_null) + " near-zero modes, expected " +
                             std::to_string(expected_kernel_dim));

  rep.lambda_min_abs = min_abs;
  rep.lambda_max_abs = max_abs;
  rep.cond = max_abs / min_abs;
  return rep;
}

double infsup_constant(const SparseMatrix& div, const SparseMatrix& velocity_norm,
                       const DenseMatrix& pressure_norm, bool exclude_constant_mode) {
  const SpdFactorization nu = factor_spd(velocity_norm);
  DenseMatrix bt = DenseMatrix(div.transpose());
  DenseMatrix x(bt.rows(), bt.cols());
  for (Eigen::Index j = 0; j < bt.cols(); ++j) x.col(j) = nu.solve(bt.col(j));
  DenseMatrix s = div * x;
  s = 0.5 * (s + s.transpose());

  const std::vector<double> mu = generalized_eigs(s, pressure_norm);
  const double max_mu = mu.back();
  const double tol = 1e-10 * std::max(max_mu, 1e-300);

  std::size_t first = 0;
  if (exclude_constant_mode) {
    if (!(std::abs(mu.front()) <= tol))
      throw std::runtime_error("infsup_constant: expected a constant-pressure kernel mode");
    first = 1;
  }
  if (first >= mu.size() || mu[first] <= tol)
    throw std::runtime_error("infsup_constant: unexpected extra kernel mode");
  return std::sqrt(mu[first]);
}

MinresResult minres(const SparseMatrix& system, const BlockPreconditioner& precond,
                    const Vector& rhs, double rtol, int maxit) {
  const auto n = system.rows();
  if (system.cols() != n || rhs.size() != n || precond.size() != n)
    throw std::invalid_argument("minres: size mismatch");
  {
    const SparseMatrix diff = SparseMatrix(system - SparseMatrix(system.transpose()));
    double scale = 0.0, asym = 0.0;
    for (int k = 0; k < system.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(system, k); it; ++it)
        scale = std::max(scale, std::abs(it.value()));
    for (int k = 0; k < diff.outerSize(); ++k)
      for (SparseMatrix::InnerIterator it(diff, k); it; ++it)
        asym = std::max(asym, std::abs(it.value()));
    if (asym > 1e-12 * std::max(scale, 1.0))
      throw std::invalid_argument("minres: system matrix is not symmetric");
  }

  MinresResult res;
  res.solution = Vector::Zero(n);

  Vector v_old = Vector::Zero(n);
  Vector v = rhs;
  Vector z = precond.apply(v);
  double gamma = std::sqrt(z.dot(v));
  if (gamma == 0.0) {  // zero right-hand side
    res.converged = true;
    return res;
  }
  const double norm0 = gamma;
  double gamma_old = 1.0;
  double eta = gamma;
  double s_old = 0.0, s_cur = 0.0, c_old = 1.0, c_cur = 1.0;
  Vector w = Vector::Zero(n), w_old = Vector::Zero(n);

  for (int it = 1; it <= maxit; ++it) {
    z /= gamma;
    const Vector az = system * z;
    const double delta = az.dot(z);
    Vector v_new = az - (delta / gamma) * v - (gamma / gamma_old) * v_old;
    Vector z_new = precond.apply(v_new);
    const double gamma_new = std::sqrt(std::max(z_new.dot(v_new), 0.0));

    const double alpha0 = c_cur * delta - c_old * s_cur * gamma;
    const double alpha1 = std::sqrt(alpha0 * alpha0 + gamma_new * gamma_new);
    const double alpha2 = s_cur * delta + c_old * c_cur * gamma;
    const double alpha3 = s_old * gamma;
    c_old = c_cur;
    s_old = s_cur;
    c_cur = alpha0 / alpha1;
    s_cur = gamma_new / alpha1;

    Vector w_new = (z - alpha3 * w_old - alpha2 * w) / alpha1;
    res.solution += c_cur * eta * w_new;
    eta = -s_cur * eta;

    w_old = std::move(w);
    w = std::move(w_new);
    v_old = std::move(v);
    v = std::move(v_new);
    z = std::move(z_new);
    gamma_old = gamma;
    gamma = gamma_new;

    res.iterations = it;
    res.relative_residual = std::abs(eta) / norm0;
    if (res.relative_residual <= rtol) {
      res.converged = true;
      break;
    }
    if (gamma == 0.0) {  // exact invariant subspace reached
      res.converged = res.relative_residual <= rtol;
      break;
    }
  }
  return res;
}

}  // namespace hdivprec
