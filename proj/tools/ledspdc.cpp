#include <CLI11.hpp>

#include <iostream>

#include "ledspdc/commands.hpp"

int main(int argc, char** argv) {
  using namespace ledspdc;
  CLI::App app{"SPDC polarization-entanglement simulator with a partially coherent pump"};
  app.require_subcommand(1);

  CommandOptions opt;
  std::string config_path, preset, mode, out;
  std::uint64_t seed = 0;
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--preset", preset, "named preset (default, setup-beam, theory, ideal)");
  app.add_option("--seed", seed, "master seed, overrides LEDSPDC_SEED and the config");
  app.add_option("--out", out, "output file");
  app.add_option("--mode", mode, "coherence mode")->check(CLI::IsMember({"literal", "calibrated"}));
  app.add_flag("--exact", opt.exact, "expected counts instead of Poisson draws");
  app.add_option("--threads", opt.threads, "worker threads for the sweep")->check(CLI::PositiveNumber);

  auto* rate = app.add_subcommand("rate", "coincidence rate at projection angles");
  rate->add_option("--theta-s", opt.theta_s, "signal projection angle, degrees");
  rate->add_option("--theta-i", opt.theta_i, "idler projection angle, degrees");

  auto* fringe = app.add_subcommand("fringe", "simulate and fit a fringe scan; CSV to --out");
  fringe->add_option("--basis", opt.basis, "H-V or A-D")->check(CLI::IsMember({"H-V", "A-D", "HV", "AD"}));
  std::string fit_out;
  fringe->add_option("--fit-out", fit_out, "FringeFit JSON file");

  app.add_subcommand("chsh", "Bell parameter at the 16 HWP settings");

  auto* tomo = app.add_subcommand("tomo", "16-projection tomography");
  tomo->add_option("--method", opt.method, "mle or linear")->check(CLI::IsMember({"mle", "linear"}));
  std::string counts_path;
  tomo->add_option("--counts", counts_path, "label -> counts JSON instead of a simulation");

  app.add_subcommand("sweep", "concurrence versus B per collection; CSV to --out");

  auto* simulate = app.add_subcommand("simulate", "write coincidence records as JSON lines");
  simulate->add_option("--plan", opt.plan, "acquisition plan")
      ->check(CLI::IsMember({"chsh", "tomo", "fringe-hv", "fringe-ad"}));

  app.add_subcommand("calibrate", "fit mu, depolarization and the mode-filter scale to the targets");

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (!config_path.empty()) opt.sources.config_path = config_path;
  if (!preset.empty()) opt.sources.preset = preset;
  if (app.count("--seed") > 0) opt.sources.seed = seed;
  if (!mode.empty()) opt.sources.mode = mode;
  if (!out.empty()) opt.out = out;
  if (!fit_out.empty()) opt.fit_out = fit_out;
  if (!counts_path.empty()) opt.counts_path = counts_path;

  const std::string command = app.get_subcommands().front()->get_name();
  return run_command(command, opt, std::cout, std::cerr);
}
