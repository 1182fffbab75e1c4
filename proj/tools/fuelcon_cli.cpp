#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "fuelcon/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "fuelcon: minimum-time consensus for double-integrator fleets with a "
      "shared fuel budget"};
  app.require_subcommand(1);

  std::string fleet_path;
  std::string report_path;

  auto* feas = app.add_subcommand(
      "feasibility", "Check the consensus velocity band of a fleet file");
  feas->add_option("fleet", fleet_path, "fleet JSON file")->required();

  fuelcon::SolveCmdOptions solve_opts;
  auto* solve = app.add_subcommand(
      "solve", "Compute the minimum-time consensus point and per-agent plans");
  solve->add_option("fleet", fleet_path, "fleet JSON file")->required();
  solve->add_flag("--hull-prune", solve_opts.hull_prune,
                  "enumerate only triplets of convex-hull agents");
  solve->add_option("--workers", solve_opts.workers,
                    "parallel workers (deterministic result)")
      ->default_val(1);
  solve->add_option("--output", solve_opts.output_path,
                    "write the report JSON here instead of stdout");

  fuelcon::BoundaryCmdOptions bnd;
  auto* boundary = app.add_subcommand(
      "boundary", "Emit the attainable-set boundary polyline as CSV");
  boundary->add_option("--x", bnd.x, "initial position")->required();
  boundary->add_option("--v", bnd.v, "initial velocity")->required();
  boundary->add_option("--beta", bnd.beta, "fuel budget")->required();
  boundary->add_option("--tf", bnd.tf, "horizon")->required();
  boundary->add_option("--n", bnd.n, "velocity stations per arc")
      ->default_val(256);
  boundary->add_option("--output", bnd.output_path,
                       "write CSV here instead of stdout");

  int samples = 400;
  std::string out_dir = ".";
  auto* simulate = app.add_subcommand(
      "simulate", "Sample trajectories of a solved report into per-agent CSVs");
  simulate->add_option("fleet", fleet_path, "fleet JSON file")->required();
  simulate->add_option("report", report_path, "report JSON file")->required();
  simulate->add_option("--samples", samples, "samples per trajectory")
      ->default_val(400);
  simulate->add_option("--out-dir", out_dir, "output directory")
      ->default_val(".");

  auto* verify = app.add_subcommand(
      "verify", "Re-simulate a report against its fleet and check endpoints");
  verify->add_option("fleet", fleet_path, "fleet JSON file")->required();
  verify->add_option("report", report_path, "report JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? fuelcon::kExitOk : fuelcon::kExitInputError;
  }

  try {
    if (feas->parsed()) {
      return fuelcon::cmd_feasibility(fleet_path, std::cout, std::cerr);
    }
    if (solve->parsed()) {
      return fuelcon::cmd_solve(fleet_path, solve_opts, std::cout, std::cerr);
    }
    if (boundary->parsed()) {
      return fuelcon::cmd_boundary(bnd, std::cout, std::cerr);
    }
    if (simulate->parsed()) {
      return fuelcon::cmd_simulate(fleet_path, report_path, samples, out_dir,
                                   std::cout, std::cerr);
    }
    if (verify->parsed()) {
      return fuelcon::cmd_verify(fleet_path, report_path, std::cout, std::cerr);
    }
  } catch (const fuelcon::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return fuelcon::kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "inconsistency: " << e.what() << "\n";
    return fuelcon::kExitInconsistent;
  }
  return fuelcon::kExitInputError;
}
