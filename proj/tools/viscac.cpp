// Command-line front end.
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include <viscac/commands.hpp>

namespace {

struct Flags {
  std::string config;
  std::string out;
  int jobs = 0;
};

void add_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->required();
  cmd->add_option("--out", f.out, "output directory (overrides config and VISCAC_OUT)");
  cmd->add_option("--jobs", f.jobs, "worker threads (overrides config and VISCAC_JOBS)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace viscac;
  CLI::App app{"Viscous acoustics: exact and impedance-model solvers on separable domains"};
  app.set_version_flag("--version", std::string(version));
  app.require_subcommand(1);
  Flags f;
  auto* solve = app.add_subcommand("solve", "exact and model fields on a grid");
  auto* converge = app.add_subcommand("converge", "modelling error against sqrt(eta), with slopes");
  auto* sweep = app.add_subcommand("sweep-omega", "modelling error against omega");
  auto* nearfield = app.add_subcommand("nearfield", "side view of the boundary layer");
  for (auto* c : {solve, converge, sweep, nearfield}) add_flags(c, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? ExitCode::Ok : ExitCode::ValidationFailure;
  }

  try {
    auto cfg = load_config(f.config);
    apply_env(cfg);
    if (!f.out.empty()) cfg.out_dir = f.out;
    if (f.jobs > 0) cfg.jobs = f.jobs;
    if (solve->parsed()) return cmd_solve(cfg, std::cerr);
    if (converge->parsed()) return cmd_converge(cfg, std::cerr);
    if (sweep->parsed()) return cmd_sweep_omega(cfg, std::cerr);
    return cmd_nearfield(cfg, std::cerr);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ExitCode::ValidationFailure;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return ExitCode::SolverFailure;
  }
}
