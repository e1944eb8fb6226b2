#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hdivprec/conductivity.hpp"
#include "hdivprec/mesh.hpp"
#include "hdivprec/precond.hpp"
#include "hdivprec/spectral.hpp"

namespace hdivprec {

enum class ProblemKind { Darcy, Biot };
enum class PressureModePolicy { Dg, ExactSchur, Both };

const char* to_string(ProblemKind p);
const char* to_string(PressureModePolicy p);
PressureModePolicy pressure_mode_policy_from_string(const std::string& s);

/// One batch experiment: a grid of (conductivity, mesh size) condition-number
/// measurements for a set of preconditioners.
struct ExperimentConfig {
  std::string name = "custom";
  ProblemKind problem = ProblemKind::Darcy;
  ConductivityVariant conductivity = ConductivityVariant::Constant;
  std::vector<double> k_values;
  std::vector<double> thetas = {0.0};  // tensor variant only
  std::vector<int> h_exponents;        // h = 2^-e, e >= 1
  std::vector<std::string> preconditioners;
  PressureModePolicy pressure_mode = PressureModePolicy::Both;
  SideSet flux_essential = SideSet::all();  // Darcy boundary layout
  bool run_minres = false;
  double minres_rtol = 1e-8;
  int minres_maxit = 1500;
  int jobs = 1;
  bool force_scale = false;  // lift the dense-eigensolve size cap
};

std::vector<std::string> preset_names();
/// Throws std::invalid_argument for unknown names.
ExperimentConfig preset(const std::string& name);
/// Reads a JSON key/value config; "experiment" may name a preset to start
/// from, otherwise all grid fields must be present.
ExperimentConfig load_config_file(const std::string& path);
/// Validates ranges, preconditioner names and the desk-scale cap.
void validate(const ExperimentConfig& cfg);

struct CellResult {
  std::string precond;
  double conductivity = 0.0;
  double theta = 0.0;
  int h_exponent = 0;
  SpectrumReport primary;
  std::optional<SpectrumReport> paren;  // exact-Schur companion value
  std::optional<int> minres_iterations;
  std::optional<bool> minres_converged;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;

  /// Cell lookup by (preconditioner, theta, K, h); throws if absent.
  const CellResult& cell(const std::string& precond, double theta, double k,
                         int h_exponent) const;
};

/// Runs the whole grid; cells are dispatched to cfg.jobs workers and stored
/// in deterministic (preconditioner, theta, K, h) order.
RunResult run(const ExperimentConfig& cfg);

/// Condition number rounding used in markdown tables: one decimal below 100,
/// integers below 1000, two significant figures above.
std::string format_cond(double cond);

void write_markdown(std::ostream& os, const RunResult& result);
void write_csv(std::ostream& os, const RunResult& result);

/// Manufactured constant-data right-hand sides for the MINRES demonstration.
Vector darcy_rhs(const DarcySystem& sys);
Vector biot_rhs(const BiotSystem& sys);

}  // namespace hdivprec
