#include "hdivprec/conductivity.hpp"

#include <cmath>
#include <stdexcept>

namespace hdivprec {

const char* to_string(ConductivityVariant v) {
  switch (v) {
    case ConductivityVariant::Constant: return "constant";
    case ConductivityVariant::Jump: return "jump";
    case ConductivityVariant::Tensor: return "tensor";
  }
  return "?";
}

ConductivityField::ConductivityField(ConductivityVariant v, double k0, double theta)
    : variant_(v), k0_(k0), theta_(theta) {
  if (!(k0 > 0.0) || k0 > 1.0)
    throw std::invalid_argument("ConductivityField: K must lie in (0, 1]");
}

ConductivityField ConductivityField::constant(double k) {
  return {ConductivityVariant::Constant, k, 0.0};
}

ConductivityField ConductivityField::jump(double k0) {
  return {ConductivityVariant::Jump, k0, 0.0};
}

ConductivityField ConductivityField::tensor(double k0, double theta) {
  return {ConductivityVariant::Tensor, k0, theta};
}

double ConductivityField::scalar_cell_value(const Mesh& mesh, int cell) const {
  switch (variant_) {
    case ConductivityVariant::Constant:
      return k0_;
    case ConductivityVariant::Jump:
      return mesh.cell_centroid(cell).x() < 0.5 ? 1.0 : k0_;
    case ConductivityVariant::Tensor:
      throw std::invalid_argument("scalar_cell_value: tensor field has no scalar value");
  }
  return 0.0;
}

Eigen::Matrix2d ConductivityField::cell_value(const Mesh& mesh, int cell) const {
  if (variant_ == ConductivityVariant::Tensor) {
    const double c = std::cos(theta_), s = std::sin(theta_);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    return rot * Eigen::Vector2d(1.0, k0_).asDiagonal() * rot.transpose();
  }
  return scalar_cell_value(mesh, cell) * Eigen::Matrix2d::Identity();
}

double ConductivityField::facet_harmonic_mean(const Mesh& mesh, int edge) const {
  if (mesh.is_boundary_edge(edge))
    throw std::invalid_argument("facet_harmonic_mean: boundary edge has one incident cell");
  if (!is_scalar())
    throw std::invalid_argument("facet_harmonic_mean: tensor field not supported");
  const auto& cells = mesh.edge_cells(edge);
  const double kp = scalar_cell_value(mesh, cells[0]);
  const double km = scalar_cell_value(mesh, cells[1]);
  return 2.0 / (1.0 / kp + 1.0 / km);
}

double ConductivityField::tensor_pressure_scalar() const {
  if (variant_ != ConductivityVariant::Tensor)
    throw std::invalid_argument("tensor_pressure_scalar: tensor variant only");
  return k0_ / (1.0 + k0_);
}

}  // namespace hdivprec
