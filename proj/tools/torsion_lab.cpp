#include "torsion/experiments.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Boundary-mean-zero torsion energy experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", torsion::kVersion);

  std::string config_path, out_dir = ".";
  bool quiet = false;
  double tol = -1.0;
  int max_level = -1;
  std::string solver;

  const std::vector<std::string> experiments = {
      "closed-form", "solve",     "polygon-sweep",  "stability",
      "annulus-compare", "box-osc", "robin-identity", "serrin-gap"};
  for (const auto& name : experiments) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON config file")->required();
    sub->add_option("--out", out_dir, "output directory");
    sub->add_flag("--quiet", quiet, "suppress progress output");
    sub->add_option("--tol", tol, "solver tolerance override");
    sub->add_option("--max-level", max_level, "cap on refinement level");
    sub->add_option("--solver", solver, "krylov or direct")
        ->check(CLI::IsMember({"krylov", "direct"}));
  }

  CLI11_PARSE(app, argc, argv);
  std::string experiment = app.get_subcommands().front()->get_name();

  nlohmann::json config;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "cannot open config: " << config_path << "\n";
      return 2;
    }
    try {
      in >> config;
    } catch (const std::exception& e) {
      std::cerr << "config parse error: " << e.what() << "\n";
      return 2;
    }
  }

  torsion::RunOptions opts;
  opts.out_dir = out_dir;
  opts.quiet = quiet;
  opts.tol = tol;
  opts.max_level = max_level;
  opts.solver = solver;

  try {
    return static_cast<int>(
        torsion::run_experiment(experiment, config, opts, std::cout));
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
