#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "hdivprec/experiment.hpp"

using namespace hdivprec;

TEST_CASE("presets") {
  CHECK(preset_names().size() == 4);
  CHECK_THROWS_AS(preset("table9"), std::invalid_argument);

  const ExperimentConfig t1 = preset("table1-left");
  CHECK(t1.problem == ProblemKind::Darcy);
  CHECK(t1.conductivity == ConductivityVariant::Constant);
  CHECK(t1.k_values == std::vector<double>{1.0, 1e-2, 1e-4, 1e-6, 1e-8});
  CHECK(t1.h_exponents == std::vector<int>{2, 3, 4, 5});
  CHECK(t1.flux_essential == SideSet::all());

  const ExperimentConfig t2 = preset("table2");
  CHECK(t2.conductivity == ConductivityVariant::Tensor);
  CHECK(t2.thetas.size() == 2);
  CHECK(t2.flux_essential == SideSet({Side::Left, Side::Right}));

  const ExperimentConfig t3 = preset("table3");
  CHECK(t3.problem == ProblemKind::Biot);
  CHECK(t3.preconditioners.size() == 4);
  CHECK(t3.h_exponents == std::vector<int>{2, 3, 4});
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = preset("table1-left");
  validate(cfg);

  ExperimentConfig bad_h = cfg;
  bad_h.h_exponents = {0};
  CHECK_THROWS_AS(validate(bad_h), std::invalid_argument);

  ExperimentConfig too_fine = cfg;
  too_fine.h_exponents = {7};
  CHECK_THROWS_AS(validate(too_fine), std::invalid_argument);
  too_fine.force_scale = true;
  validate(too_fine);

  ExperimentConfig biot_fine = preset("table3");
  biot_fine.h_exponents = {6};
  CHECK_THROWS_AS(validate(biot_fine), std::invalid_argument);

  ExperimentConfig bad_k = cfg;
  bad_k.k_values = {2.0};
  CHECK_THROWS_AS(validate(bad_k), std::invalid_argument);

  ExperimentConfig bad_prec = cfg;
  bad_prec.preconditioners = {"B3"};
  CHECK_THROWS_AS(validate(bad_prec), std::invalid_argument);
}

TEST_CASE("condition formatting mirrors the table precision") {
  CHECK(format_cond(1.1049) == "1.1");
  CHECK(format_cond(3.456) == "3.5");
  CHECK(format_cond(13.34) == "13.3");
  CHECK(format_cond(91.2) == "91.2");
  CHECK(format_cond(118.4) == "118");
  CHECK(format_cond(739.0) == "739");
  CHECK(format_cond(1042.0) == "1.0e3");
  CHECK(format_cond(5.17e6) == "5.2e6");
  CHECK(format_cond(9.97e3) == "1.0e4");
}

TEST_CASE("a small custom run produces a deterministic table") {
  ExperimentConfig cfg;
  cfg.name = "custom";
  cfg.problem = ProblemKind::Darcy;
  cfg.conductivity = ConductivityVariant::Constant;
  cfg.k_values = {1e-2};
  cfg.h_exponents = {2};
  cfg.preconditioners = {"B1", "B2"};
  cfg.pressure_mode = PressureModePolicy::Both;
  cfg.flux_essential = SideSet::all();
  cfg.jobs = 2;

  const RunResult r1 = run(cfg);
  CHECK(r1.cells.size() == 2);
  const CellResult& b2 = r1.cell("B2", 0.0, 1e-2, 2);
  CHECK(b2.primary.pressure_mode == "dg");
  REQUIRE(b2.paren.has_value());
  CHECK(b2.paren->pressure_mode == "exact-schur");

  std::ostringstream md1, md2, csv1;
  write_markdown(md1, r1);
  const RunResult r2 = run(cfg);
  write_markdown(md2, r2);
  CHECK(md1.str() == md2.str());  // byte-reproducible re-runs

  write_csv(csv1, r1);
  const std::string csv = csv1.str();
  CHECK(csv.find("B1") != std::string::npos);
  CHECK(csv.find("exact-schur") != std::string::npos);

  // the markdown cells carry exactly the rounded csv payload
  std::istringstream lines(csv);
  std::string line;
  std::getline(lines, line);  // header
  int rows = 0;
  while (std::getline(lines, line)) {
    ++rows;
    std::istringstream fields(line);
    std::string field;
    for (int i = 0; i < 8; ++i) std::getline(fields, field, ',');
    const double cond = std::stod(field);
    CHECK(md1.str().find(format_cond(cond)) != std::string::npos);
  }
  CHECK(rows == 3);  // B1 + B2 dg + B2 exact-schur
}

TEST_CASE("json config round trip") {
  const char* path = "test_config_tmp.json";
  {
    std::ofstream out(path);
    out << R"({
      "experiment": "custom",
      "problem": "darcy",
      "conductivity": "jump",
      "k_values": [1e-2],
      "h_exponents": [2],
      "preconditioners": ["B2"],
      "pressure_mode": "exact-schur",
      "flux_essential": ["left", "right"],
      "minres": true,
      "minres_rtol": 1e-6,
      "jobs": 2
    })";
  }
  const ExperimentConfig cfg = load_config_file(path);
  std::remove(path);
  CHECK(cfg.conductivity == ConductivityVariant::Jump);
  CHECK(cfg.k_values == std::vector<double>{1e-2});
  CHECK(cfg.pressure_mode == PressureModePolicy::ExactSchur);
  CHECK(cfg.flux_essential == SideSet({Side::Left, Side::Right}));
  CHECK(cfg.run_minres);
  CHECK(cfg.minres_rtol == 1e-6);
  CHECK(cfg.jobs == 2);

  const RunResult r = run(cfg);
  CHECK(r.cells.size() == 1);
  CHECK(r.cells[0].primary.pressure_mode == "exact-schur");
  CHECK(r.cells[0].minres_iterations.has_value());

  // a custom config without its grid is rejected
  {
    std::ofstream out(path);
    out << R"({"experiment": "custom", "problem": "darcy"})";
  }
  CHECK_THROWS_AS(load_config_file(path), std::invalid_argument);
  std::remove(path);
}
