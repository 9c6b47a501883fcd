#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>

#include "arpsim/dynamics.hpp"
#include "arpsim/scan.hpp"
#include "arpsim/tolerance.hpp"
#include "arpsim/types.hpp"
#include "arpsim/version.hpp"
#include "commands.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

void add_common(CLI::App* cmd, arpsim::cli::CommonOptions& o, bool with_engine) {
  cmd->add_option("--config", o.config, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--workers", o.workers, "worker threads (0 = all cores)")->capture_default_str();
  cmd->add_flag("--no-plots", o.no_plots, "skip SVG output");
  if (with_engine) {
    cmd->add_option("--engine", o.engine, "efficiency engine, overrides the config")
        ->check(CLI::IsMember({"full", "full_simulation", "multijump"}));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adiabatic rapid passage under sinusoidal detuning noise"};
  app.set_version_flag("--version", arpsim::kVersion);
  app.require_subcommand(1);

  arpsim::cli::CommonOptions common;
  std::optional<double> rabi, rate;

  auto* sweep = app.add_subcommand("sweep", "single trajectory: populations, Bloch vector, final P_e");
  add_common(sweep, common, false);
  auto* scan = app.add_subcommand("scan", "phase-averaged efficiency over a 1-D or 2-D parameter grid");
  add_common(scan, common, true);
  auto* tolerance = app.add_subcommand("tolerance", "noise tolerance curves and boundary slopes");
  add_common(tolerance, common, true);
  auto* compare = app.add_subcommand("compare", "full simulation vs multi-jump model on the same grid");
  add_common(compare, common, false);
  auto* lz = app.add_subcommand("lz", "noiseless Landau-Zener transfer");
  add_common(lz, common, false);
  lz->add_option("--rabi", rabi, "Rabi frequency (overrides [sweep])");
  lz->add_option("--rate", rate, "sweep rate (overrides [sweep])");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*sweep) return arpsim::cli::cmd_sweep(common);
    if (*scan) return arpsim::cli::cmd_scan(common);
    if (*tolerance) return arpsim::cli::cmd_tolerance(common);
    if (*compare) return arpsim::cli::cmd_compare(common);
    if (*lz) return arpsim::cli::cmd_lz(common, rabi, rate);
  } catch (const arpsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
