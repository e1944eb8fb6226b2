#include "hdivprec/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hdivprec/forms.hpp"

namespace hdivprec {

const char* to_string(ProblemKind p) { return p == ProblemKind::Darcy ? "darcy" : "biot"; }

const char* to_string(PressureModePolicy p) {
  switch (p) {
    case PressureModePolicy::Dg: return "dg";
    case PressureModePolicy::ExactSchur: return "exact-schur";
    case PressureModePolicy::Both: return "both";
  }
  return "?";
}

PressureModePolicy pressure_mode_policy_from_string(const std::string& s) {
  if (s == "dg") return PressureModePolicy::Dg;
  if (s == "exact-schur" || s == "exact_schur") return PressureModePolicy::ExactSchur;
  if (s == "both") return PressureModePolicy::Both;
  throw std::invalid_argument("unknown pressure mode: " + s);
}

namespace {

const std::vector<double> kDecades = {1.0, 1e-2, 1e-4, 1e-6, 1e-8};

Side side_from_string(const std::string& s) {
  if (s == "left") return Side::Left;
  if (s == "right") return Side::Right;
  if (s == "bottom") return Side::Bottom;
  if (s == "top") return Side::Top;
  throw std::invalid_argument("unknown side: " + s);
}

ConductivityVariant variant_from_string(const std::string& s) {
  if (s == "constant") return ConductivityVariant::Constant;
  if (s == "jump") return ConductivityVariant::Jump;
  if (s == "tensor") return ConductivityVariant::Tensor;
  throw std::invalid_argument("unknown conductivity variant: " + s);
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"table1-left", "table1-right", "table2", "table3"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.name = name;
  if (name == "table1-left") {
    cfg.problem = ProblemKind::Darcy;
    cfg.conductivity = ConductivityVariant::Constant;
    cfg.k_values = kDecades;
    cfg.h_exponents = {2, 3, 4, 5};
    cfg.preconditioners = {"B1", "B2"};
    cfg.flux_essential = SideSet::all();
  } else if (name == "table1-right") {
    cfg.problem = ProblemKind::Darcy;
    cfg.conductivity = ConductivityVariant::Jump;
    cfg.k_values = kDecades;
    cfg.h_exponents = {2, 3, 4, 5};
    cfg.preconditioners = {"B1", "B2"};
    cfg.flux_essential = {Side::Left, Side::Right};
  } else if (name == "table2") {
    cfg.problem = ProblemKind::Darcy;
    cfg.conductivity = ConductivityVariant::Tensor;
    cfg.k_values = kDecades;
    cfg.thetas = {0.0, std::numbers::pi / 4.0};
    cfg.h_exponents = {3, 4, 5};
    cfg.preconditioners = {"B1", "B2"};
    cfg.flux_essential = {Side::Left, Side::Right};
  } else if (name == "table3") {
    cfg.problem = ProblemKind::Biot;
    cfg.conductivity = ConductivityVariant::Constant;
    cfg.k_values = {1.0, 1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-8};
    cfg.h_exponents = {2, 3, 4};
    cfg.preconditioners = {"B1", "B2", "B1K", "B2K"};
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  nlohmann::json doc = nlohmann::json::parse(in);

  ExperimentConfig cfg;
  const std::string experiment = doc.value("experiment", std::string("custom"));
  if (experiment != "custom") {
    cfg = preset(experiment);
  } else {
    cfg.name = "custom";
    for (const char* key : {"problem", "k_values", "h_exponents", "preconditioners"})
      if (!doc.contains(key))
        throw std::invalid_argument("custom experiment: missing required key '" +
                                    std::string(key) + "'");
  }

  if (doc.contains("problem")) {
    const std::string p = doc["problem"];
    if (p == "darcy") cfg.problem = ProblemKind::Darcy;
    else if (p == "biot") cfg.problem = ProblemKind::Biot;
    else throw std::invalid_argument("unknown problem: " + p);
  }
  if (doc.contains("conductivity")) cfg.conductivity = variant_from_string(doc["conductivity"]);
  else if (cfg.name == "custom" && cfg.problem == ProblemKind::Darcy)
    throw std::invalid_argument("custom darcy experiment: missing key 'conductivity'");
  if (doc.contains("k_values")) cfg.k_values = doc["k_values"].get<std::vector<double>>();
  if (doc.contains("thetas")) cfg.thetas = doc["thetas"].get<std::vector<double>>();
  if (doc.contains("h_exponents")) cfg.h_exponents = doc["h_exponents"].get<std::vector<int>>();
  if (doc.contains("preconditioners"))
    cfg.preconditioners = doc["preconditioners"].get<std::vector<std::string>>();
  if (doc.contains("pressure_mode"))
    cfg.pressure_mode = pressure_mode_policy_from_string(doc["pressure_mode"]);
  if (doc.contains("flux_essential")) {
    SideSet built = SideSet::none();
    for (const auto& s : doc["flux_essential"])
      built = built.with(side_from_string(s.get<std::string>()));
    cfg.flux_essential = built;
  }
  if (doc.contains("minres")) cfg.run_minres = doc["minres"];
  if (doc.contains("minres_rtol")) cfg.minres_rtol = doc["minres_rtol"];
  if (doc.contains("minres_maxit")) cfg.minres_maxit = doc["minres_maxit"];
  if (doc.contains("jobs")) cfg.jobs = doc["jobs"];
  if (doc.contains("force_scale")) cfg.force_scale = doc["force_scale"];
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.k_values.empty() || cfg.h_exponents.empty() || cfg.preconditioners.empty())
    throw std::invalid_argument("experiment: empty K, h or preconditioner list");
  for (double k : cfg.k_values)
    if (!(k > 0.0) || k > 1.0)
      throw std::invalid_argument("experiment: K values must lie in (0, 1]");
  for (int e : cfg.h_exponents) {
    if (e < 1) throw std::invalid_argument("experiment: h exponents must be >= 1");
    const int cap = cfg.problem == ProblemKind::Darcy ? 6 : 5;
    if (e > cap && !cfg.force_scale)
      throw std::invalid_argument(
          "experiment: h = 2^-" + std::to_string(e) +
          " exceeds the dense-eigensolve cap (2^-" + std::to_string(cap) +
          "); pass --force to override");
  }
  if (cfg.conductivity == ConductivityVariant::Jump)
    for (int e : cfg.h_exponents)
      if ((1 << e) % 2 != 0)
        throw std::invalid_argument("experiment: jump conductivity needs an even subdivision count");
  for (const auto& p : cfg.preconditioners) {
    if (cfg.problem == ProblemKind::Darcy) {
      if (p != "B1" && p != "B2")
        throw std::invalid_argument("darcy preconditioner must be B1 or B2, got " + p);
    } else {
      biot_precond_kind_from_string(p);  // throws on unknown names
    }
  }
  if (cfg.problem == ProblemKind::Biot && cfg.conductivity != ConductivityVariant::Constant)
    throw std::invalid_argument("biot experiments use constant conductivity");
  if (cfg.jobs < 1) throw std::invalid_argument("experiment: jobs must be >= 1");
}

Vector darcy_rhs(const DarcySystem& sys) {
  const Eigen::Vector2d f(1.0, 1.0);
  Vector rhs = Vector::Zero(sys.size());
  const auto& rt0 = sys.velocity_dofs;
  for (int c = 0; c < sys.mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(sys.mesh, c);
    const Eigen::Vector2d centroid = sys.mesh.cell_centroid(c);
    const auto& dofs = rt0.cell_dofs(c);
    for (int i = 0; i < 3; ++i) {
      const int fi = rt0.free_index(dofs[i].index);
      if (fi < 0) continue;
      // integral of the basis function over the cell
      const Eigen::Vector2d integral =
          dofs[i].sign * g.edge_length[i] / 2.0 * (centroid - g.p[i]);
      rhs[fi] += integral.dot(f);
    }
  }
  const bool zero_mean = sys.kernel_dim() > 0;
  for (int c = 0; c < sys.mesh.num_cells(); ++c) {
    const double gval = zero_mean ? sys.mesh.cell_centroid(c).x() - 0.5 : 1.0;
    rhs[sys.n_velocity() + c] = sys.mesh.cell_area(c) * gval;
  }
  return rhs;
}

Vector biot_rhs(const BiotSystem& sys) {
  const Eigen::Vector2d fu(1.0, 1.0), fv(1.0, 1.0);
  Vector rhs = Vector::Zero(sys.size());
  const auto& p2 = sys.displacement_dofs;
  const auto& rt0 = sys.flux_dofs;
  constexpr std::array<std::array<double, 3>, 3> quad = {{
      {0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}}};
  for (int c = 0; c < sys.mesh.num_cells(); ++c) {
    const auto g = CellGeometry::from(sys.mesh, c);
    const auto& dofs = p2.cell_dofs(c);
    for (const auto& lambda : quad) {
      const auto vals = p2_values(lambda);
      for (int a = 0; a < 12; ++a) {
        const int fi = p2.free_index(dofs[a].index);
        if (fi < 0) continue;
        rhs[fi] += g.area / 3.0 * vals[a % 6] * fu[a / 6];
      }
    }
    const Eigen::Vector2d centroid = sys.mesh.cell_centroid(c);
    const auto& fdofs = rt0.cell_dofs(c);
    for (int i = 0; i < 3; ++i) {
      const int fi = rt0.free_index(fdofs[i].index);
      if (fi < 0) continue;
      const Eigen::Vector2d integral =
          fdofs[i].sign * g.edge_length[i] / 2.0 * (centroid - g.p[i]);
      rhs[sys.n_displacement() + fi] += integral.dot(fv);
    }
    rhs[sys.n_displacement() + sys.n_flux() + c] = sys.mesh.cell_area(c);
  }
  return rhs;
}

namespace {

ConductivityField make_field(const ExperimentConfig& cfg, double k, double theta) {
  switch (cfg.conductivity) {
    case ConductivityVariant::Constant: return ConductivityField::constant(k);
    case ConductivityVariant::Jump: return ConductivityField::jump(k);
    case ConductivityVariant::Tensor: return ConductivityField::tensor(k, theta);
  }
  throw std::logic_error("unreachable");
}

CellResult compute_cell(const ExperimentConfig& cfg, const std::string& precond, double k,
                        double theta, int h_exp) {
  CellResult cell;
  cell.precond = precond;
  cell.conductivity = k;
  cell.theta = theta;
  cell.h_exponent = h_exp;

  const Mesh mesh = Mesh::unit_square(1 << h_exp);

  auto fill_meta = [&](SpectrumReport& rep, const std::string& mode) {
    rep.preconditioner = precond;
    rep.pressure_mode = mode;
    rep.conductivity = k;
    rep.theta = theta;
    rep.h_exponent = h_exp;
  };

  if (cfg.problem == ProblemKind::Darcy) {
    const ConductivityField field = make_field(cfg, k, theta);
    const DarcySystem sys = build_darcy_system(mesh, field, cfg.flux_essential);
    const SideSet pressure_dirichlet = cfg.flux_essential.complement();

    std::optional<BlockPreconditioner> used;  // preconditioner driving MINRES
    if (precond == "B1") {
      used = darcy_b1(sys);
      cell.primary = condition_number(sys.full, *used, sys.kernel_dim());
      fill_meta(cell.primary, "-");
    } else {
      const bool want_dg = cfg.pressure_mode != PressureModePolicy::ExactSchur;
      const bool want_schur = cfg.pressure_mode != PressureModePolicy::Dg;
      if (want_dg) {
        used = darcy_b2(sys, PressureMode::Dg, pressure_dirichlet);
        cell.primary = condition_number(sys.full, *used, sys.kernel_dim());
        fill_meta(cell.primary, "dg");
      }
      if (want_schur) {
        BlockPreconditioner schur = darcy_b2(sys, PressureMode::ExactSchur, pressure_dirichlet);
        SpectrumReport rep = condition_number(sys.full, schur, sys.kernel_dim());
        fill_meta(rep, "exact-schur");
        if (want_dg) {
          cell.paren = std::move(rep);
        } else {
          cell.primary = std::move(rep);
          used = std::move(schur);
        }
      }
    }
    if (cfg.run_minres) {
      const MinresResult mr =
          minres(sys.full, *used, darcy_rhs(sys), cfg.minres_rtol, cfg.minres_maxit);
      cell.minres_iterations = mr.iterations;
      cell.minres_converged = mr.converged;
    }
  } else {
    const BiotSystem sys = build_biot_system(mesh, k);
    const BlockPreconditioner prec = biot_precond(sys, biot_precond_kind_from_string(precond));
    cell.primary = condition_number(sys.full, prec, 0);
    fill_meta(cell.primary, "-");
    if (cfg.run_minres) {
      const MinresResult mr =
          minres(sys.full, prec, biot_rhs(sys), cfg.minres_rtol, cfg.minres_maxit);
      cell.minres_iterations = mr.iterations;
      cell.minres_converged = mr.converged;
    }
  }
  return cell;
}

}  // namespace

const CellResult& RunResult::cell(const std::string& precond, double theta, double k,
                                  int h_exponent) const {
  for (const auto& c : cells)
    if (c.precond == precond && c.h_exponent == h_exponent &&
        std::abs(c.conductivity - k) <= 1e-14 * k && std::abs(c.theta - theta) <= 1e-14)
      return c;
  throw std::out_of_range("RunResult::cell: no such grid point");
}

RunResult run(const ExperimentConfig& cfg) {
  validate(cfg);

  struct JobSpec {
    std::string precond;
    double k, theta;
    int h_exp;
  };
  std::vector<JobSpec> jobs;
  const std::vector<double> thetas =
      cfg.conductivity == ConductivityVariant::Tensor ? cfg.thetas : std::vector<double>{0.0};
  for (const auto& p : cfg.preconditioners)
    for (double theta : thetas)
      for (double k : cfg.k_values)
        for (int e : cfg.h_exponents) jobs.push_back({p, k, theta, e});

  RunResult result;
  result.config = cfg;
  result.cells.resize(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) break;
      try {
        result.cells[i] =
            compute_cell(cfg, jobs[i].precond, jobs[i].k, jobs[i].theta, jobs[i].h_exp);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const int nworkers = std::max(1, cfg.jobs);
  {
    std::vector<std::thread> pool;
    for (int t = 1; t < nworkers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);
  return result;
}

std::string format_cond(double cond) {
  char buf[32];
  if (!std::isfinite(cond)) return "inf";
  if (cond < 99.95) {
    std::snprintf(buf, sizeof buf, "%.1f", cond);
  } else if (cond < 999.5) {
    std::snprintf(buf, sizeof buf, "%.0f", cond);
  } else {
    int exp = static_cast<int>(std::floor(std::log10(cond)));
    double mant = cond / std::pow(10.0, exp);
    if (mant >= 9.95) {
      mant /= 10.0;
      ++exp;
    }
    std::snprintf(buf, sizeof buf, "%.1fe%d", mant, exp);
  }
  return buf;
}

namespace {

std::string format_k(double k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", k);
  return buf;
}

std::string cell_text(const CellResult& c) {
  std::string s = format_cond(c.primary.cond);
  if (c.paren) s += "(" + format_cond(c.paren->cond) + ")";
  return s;
}

}  // namespace

void write_markdown(std::ostream& os, const RunResult& result) {
  const auto& cfg = result.config;
  os << "# " << cfg.name << "\n\n";
  os << "- problem: " << to_string(cfg.problem) << "\n";
  os << "- conductivity: " << to_string(cfg.conductivity) << "\n";
  if (cfg.problem == ProblemKind::Darcy) {
    os << "- flux dirichlet sides:";
    for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top})
      if (cfg.flux_essential.contains(s)) os << " " << to_string(s);
    os << "\n- pressure mode: " << to_string(cfg.pressure_mode) << "\n";
  }
  os << "\n";

  const std::vector<double> thetas =
      cfg.conductivity == ConductivityVariant::Tensor ? cfg.thetas : std::vector<double>{0.0};

  for (const auto& p : cfg.preconditioners) {
    os << "## " << p << "\n\n";
    os << "| theta | K \\ h |";
    for (int e : cfg.h_exponents) os << " 2^-" << e << " |";
    os << "\n|---|---|";
    for (std::size_t i = 0; i < cfg.h_exponents.size(); ++i) os << "---|";
    os << "\n";
    for (double theta : thetas) {
      for (double k : cfg.k_values) {
        os << "| " << format_k(theta) << " | " << format_k(k) << " |";
        for (int e : cfg.h_exponents) os << " " << cell_text(result.cell(p, theta, k, e)) << " |";
        os << "\n";
      }
    }
    os << "\n";
  }

  if (cfg.run_minres) {
    os << "## MINRES iterations (rtol=" << cfg.minres_rtol << ", maxit=" << cfg.minres_maxit
       << ")\n\n";
    for (const auto& p : cfg.preconditioners) {
      os << "### " << p << "\n\n| theta | K \\ h |";
      for (int e : cfg.h_exponents) os << " 2^-" << e << " |";
      os << "\n|---|---|";
      for (std::size_t i = 0; i < cfg.h_exponents.size(); ++i) os << "---|";
      os << "\n";
      for (double theta : thetas) {
        for (double k : cfg.k_values) {
          os << "| " << format_k(theta) << " | " << format_k(k) << " |";
          for (int e : cfg.h_exponents) {
            const auto& c = result.cell(p, theta, k, e);
            os << " " << (c.minres_iterations ? std::to_string(*c.minres_iterations) : "-");
            if (c.minres_converged && !*c.minres_converged) os << "*";
            os << " |";
          }
          os << "\n";
        }
      }
      os << "\n";
    }
    os << "(* did not reach the tolerance within maxit)\n";
  }
}

void write_csv(std::ostream& os, const RunResult& result) {
  os << "experiment,problem,preconditioner,theta,K,h_exponent,pressure_mode,cond,"
        "lambda_min_abs,lambda_max_abs,n_filtered_null,minres_iterations,minres_converged\n";
  char buf[64];
  auto num = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return std::string(buf);
  };
  const auto& cfg = result.config;
  auto row = [&](const CellResult& c, const SpectrumReport& rep) {
    os << cfg.name << "," << to_string(cfg.problem) << "," << c.precond << ","
       << num(c.theta) << "," << num(c.conductivity) << "," << c.h_exponent << ","
       << rep.pressure_mode << "," << num(rep.cond) << "," << num(rep.lambda_min_abs) << ","
       << num(rep.lambda_max_abs) << "," << rep.n_filtered_null << ",";
    if (c.minres_iterations) os << *c.minres_iterations;
    os << ",";
    if (c.minres_converged) os << (*c.minres_converged ? "yes" : "no");
    os << "\n";
  };
  for (const auto& c : result.cells) {
    row(c, c.primary);
    if (c.paren) row(c, *c.paren);
  }
}

}  // namespace hdivprec
