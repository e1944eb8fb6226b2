#include <doctest.h>

#include <cmath>
#include <random>

#include "hdivprec/precond.hpp"

using namespace hdivprec;

namespace {

bool is_spd(const DenseMatrix& a) {
  Eigen::LLT<DenseMatrix> llt(0.5 * (a + a.transpose()));
  return llt.info() == Eigen::Success;
}

Vector random_vector(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

}  // namespace

TEST_CASE("sum-of-inverses block applies the sum of the inverses") {
  const int n = 12;
  std::mt19937 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DenseMatrix c(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = u(rng);
  const DenseMatrix m1 = c * c.transpose() + n * DenseMatrix::Identity(n, n);

  // singular PSD second term with a constant kernel
  Vector ones = Vector::Ones(n);
  DenseMatrix m2 = 2.5 * (DenseMatrix::Identity(n, n) - ones * ones.transpose() / n);

  const Block block = Block::sum_of_inverses({m1, m2}, {0, 1});
  const DenseMatrix m1_inv = m1.inverse();
  const DenseMatrix m2_pinv = spd_pseudo_inverse(m2, 1);
  for (unsigned seed : {3u, 4u}) {
    const Vector v = random_vector(n, seed);
    const Vector expect = m1_inv * v + m2_pinv * v;
    CHECK((block.apply(v) - expect).norm() <= 1e-10 * expect.norm());
  }

  // norm matrix is the inverse of the apply operator
  const DenseMatrix norm = block.norm_matrix();
  CHECK(is_spd(norm));
  const Vector v = random_vector(n, 9u);
  CHECK((norm * block.apply(v) - v).norm() <= 1e-9 * v.norm());
}

TEST_CASE("darcy B1 blocks") {
  const Mesh m = Mesh::unit_square(2);
  const DarcySystem sys =
      build_darcy_system(m, ConductivityField::constant(1.0), SideSet::all());
  const BlockPreconditioner p = darcy_b1(sys);
  CHECK(p.size() == sys.size());
  CHECK(p.num_blocks() == 2);

  // K = 1: velocity norm is exactly M + D
  const DofMap& rt0 = sys.velocity_dofs;
  const DenseMatrix md =
      dense(restrict_to_free(assemble_velocity_mass(m, rt0, ConductivityField::constant(1.0)),
                             rt0, rt0)) +
      dense(restrict_to_free(assemble_divdiv(m, rt0), rt0, rt0));
  CHECK((p.block(0).norm_matrix() - md).cwiseAbs().maxCoeff() <=
        1e-13 * md.cwiseAbs().maxCoeff());

  // every block SPD
  for (int b = 0; b < p.num_blocks(); ++b) CHECK(is_spd(p.block(b).norm_matrix()));
}

TEST_CASE("darcy B2 blocks are SPD in both pressure modes") {
  const Mesh m = Mesh::unit_square(2);
  for (double k : {1.0, 1e-4}) {
    const DarcySystem sys =
        build_darcy_system(m, ConductivityField::constant(k), SideSet::all());
    for (PressureMode mode : {PressureMode::Dg, PressureMode::ExactSchur}) {
      const BlockPreconditioner p = darcy_b2(sys, mode, SideSet::none());
      CHECK(p.size() == sys.size());
      for (int b = 0; b < p.num_blocks(); ++b) CHECK(is_spd(p.block(b).norm_matrix()));
    }
  }
}

TEST_CASE("exact Schur pressure matrix pulls a constant K through") {
  const Mesh m = Mesh::unit_square(2);
  const double k = 1e-3;
  const DarcySystem sys_k =
      build_darcy_system(m, ConductivityField::constant(k), SideSet::all());
  const DarcySystem sys_1 =
      build_darcy_system(m, ConductivityField::constant(1.0), SideSet::all());

  // S(K) = B (M_K)^-1 B^T = K * B M^-1 B^T; compare through the assembled blocks
  const SpdFactorization fk = factor_spd(sys_k.velocity_mass);
  const SpdFactorization f1 = factor_spd(sys_1.velocity_mass);
  DenseMatrix btk = DenseMatrix(sys_k.div.transpose());
  DenseMatrix sk(sys_k.n_pressure(), sys_k.n_pressure());
  DenseMatrix s1(sys_1.n_pressure(), sys_1.n_pressure());
  {
    DenseMatrix xk(btk.rows(), btk.cols()), x1(btk.rows(), btk.cols());
    for (Eigen::Index j = 0; j < btk.cols(); ++j) {
      xk.col(j) = fk.solve(btk.col(j));
      x1.col(j) = f1.solve(btk.col(j));
    }
    sk = sys_k.div * xk;
    s1 = sys_1.div * x1;
  }
  CHECK((sk - k * s1).cwiseAbs().maxCoeff() <= 1e-12 * sk.cwiseAbs().maxCoeff());
}

TEST_CASE("biot preconditioner block structure") {
  const Mesh m = Mesh::unit_square(2);
  const double k = 1e-2;
  const BiotSystem sys = build_biot_system(m, k);

  const DofMap& rt0 = sys.flux_dofs;
  const DenseMatrix mass = dense(restrict_to_free(
      assemble_velocity_mass(m, rt0, ConductivityField::constant(1.0)), rt0, rt0));
  const DenseMatrix divdiv = dense(restrict_to_free(assemble_divdiv(m, rt0), rt0, rt0));
  const DenseMatrix mp = dense(assemble_p0_mass(m, sys.pressure_dofs));

  const BlockPreconditioner b1 = biot_precond(sys, BiotPrecondKind::B1);
  const BlockPreconditioner b2 = biot_precond(sys, BiotPrecondKind::B2);
  const BlockPreconditioner b1k = biot_precond(sys, BiotPrecondKind::B1K);
  const BlockPreconditioner b2k = biot_precond(sys, BiotPrecondKind::B2K);

  CHECK(b1.size() == sys.size());
  CHECK((b1.block(0).norm_matrix() - dense(sys.elasticity)).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b1.block(1).norm_matrix() - (mass + divdiv) / k).cwiseAbs().maxCoeff() <=
        1e-12 * ((mass + divdiv) / k).cwiseAbs().maxCoeff());
  CHECK((b2.block(1).norm_matrix() - (mass / k + divdiv)).cwiseAbs().maxCoeff() <=
        1e-12 * (mass / k + divdiv).cwiseAbs().maxCoeff());
  CHECK((b1.block(2).norm_matrix() - mp).cwiseAbs().maxCoeff() == 0.0);
  CHECK((b1k.block(2).norm_matrix() - k * mp).cwiseAbs().maxCoeff() <=
        1e-15 * mp.cwiseAbs().maxCoeff());
  CHECK((b2k.block(2).norm_matrix() - k * mp).cwiseAbs().maxCoeff() <=
        1e-15 * mp.cwiseAbs().maxCoeff());

  for (const auto* p : {&b1, &b2, &b1k, &b2k})
    for (int b = 0; b < p->num_blocks(); ++b) CHECK(is_spd(p->block(b).norm_matrix()));
}

TEST_CASE("biot B1 and B2 coincide at K = 1") {
  const Mesh m = Mesh::unit_square(2);
  const BiotSystem sys = build_biot_system(m, 1.0);
  const BlockPreconditioner b1 = biot_precond(sys, BiotPrecondKind::B1);
  const BlockPreconditioner b2 = biot_precond(sys, BiotPrecondKind::B2);
  for (int b = 0; b < 3; ++b)
    CHECK((b1.block(b).norm_matrix() - b2.block(b).norm_matrix()).cwiseAbs().maxCoeff() <=
          1e-14);
}
