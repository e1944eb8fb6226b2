#pragma once

#include <Eigen/Core>

#include "hdivprec/mesh.hpp"

namespace hdivprec {

enum class ConductivityVariant {
  Constant,  // K * I everywhere
  Jump,      // 1 for x < 1/2, K0 otherwise
  Tensor,    // R_theta diag(1, K0) R_theta^T, uniform over the domain
};

const char* to_string(ConductivityVariant v);

/// Hydraulic conductivity model. Immutable value object.
class ConductivityField {
public:
  static ConductivityField constant(double k);
  static ConductivityField jump(double k0);
  static ConductivityField tensor(double k0, double theta);

  ConductivityVariant variant() const { return variant_; }
  bool is_scalar() const { return variant_ != ConductivityVariant::Tensor; }
  double k0() const { return k0_; }
  double theta() const { return theta_; }

  /// Conductivity on a cell as a 2x2 SPD matrix (scalar variants return K*I).
  Eigen::Matrix2d cell_value(const Mesh& mesh, int cell) const;
  /// Scalar conductivity on a cell; throws for the tensor variant.
  double scalar_cell_value(const Mesh& mesh, int cell) const;

  /// Harmonic mean 1 / avg(K^-1) of the two incident cell values. Throws for
  /// boundary edges and for the tensor variant.
  double facet_harmonic_mean(const Mesh& mesh, int edge) const;

  /// k = 1 / sum_i lambda_i(K)^-1 = K0 / (1 + K0); tensor variant only.
  double tensor_pressure_scalar() const;

private:
  ConductivityField(ConductivityVariant v, double k0, double theta);

  ConductivityVariant variant_;
  double k0_;
  double theta_;
};

}  // namespace hdivprec
