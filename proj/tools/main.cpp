#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hdivprec/experiment.hpp"

namespace {

bool is_preset(const std::string& name) {
  for (const auto& p : hdivprec::preset_names())
    if (p == name) return true;
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Condition-number experiments for block-preconditioned mixed Darcy "
               "and Biot saddle-point systems"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list-presets", "List the built-in experiment presets");

  auto* run_cmd = app.add_subcommand("run", "Run a preset or a JSON config file");
  std::string target;
  run_cmd->add_option("experiment", target, "Preset name or path to a config file")->required();
  std::string format = "md";
  run_cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "md"}));
  std::string out_path;
  run_cmd->add_option("--out", out_path, "Output file (default: stdout)");
  std::string pressure_mode;
  run_cmd->add_option("--pressure-mode", pressure_mode, "Pressure block of the B2 preconditioner")
      ->check(CLI::IsMember({"dg", "exact-schur", "both"}));
  bool minres = false;
  run_cmd->add_flag("--minres", minres, "Also record MINRES iteration counts");
  int max_h_exp = 0;
  run_cmd->add_option("--max-h-exp", max_h_exp, "Drop grid columns finer than h = 2^-n");
  int jobs = 0;
  run_cmd->add_option("--jobs", jobs, "Worker threads for the experiment grid");
  bool force = false;
  run_cmd->add_flag("--force", force, "Override the dense-eigensolve size cap");

  CLI11_PARSE(app, argc, argv);

  if (list_cmd->parsed()) {
    for (const auto& p : hdivprec::preset_names()) std::cout << p << "\n";
    return 0;
  }

  try {
    hdivprec::ExperimentConfig cfg =
        is_preset(target) ? hdivprec::preset(target) : hdivprec::load_config_file(target);

    if (!pressure_mode.empty())
      cfg.pressure_mode = hdivprec::pressure_mode_policy_from_string(pressure_mode);
    if (minres) cfg.run_minres = true;
    if (max_h_exp > 0) {
      std::erase_if(cfg.h_exponents, [max_h_exp](int e) { return e > max_h_exp; });
      if (cfg.h_exponents.empty())
        throw std::invalid_argument("--max-h-exp removed every grid column");
    }
    if (jobs > 0) cfg.jobs = jobs;
    if (force) cfg.force_scale = true;
    if (cfg.jobs > 1) {
      // avoid oversubscribing the BLAS when grid cells run concurrently
      setenv("OPENBLAS_NUM_THREADS", "1", 0);
      setenv("OMP_NUM_THREADS", "1", 0);
    }

    const hdivprec::RunResult result = hdivprec::run(cfg);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) throw std::runtime_error("cannot open output file: " + out_path);
      os = &file;
    }
    if (format == "csv")
      hdivprec::write_csv(*os, result);
    else
      hdivprec::write_markdown(*os, result);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
