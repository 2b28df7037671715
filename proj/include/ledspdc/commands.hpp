#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ledspdc/config.hpp"

namespace ledspdc {

struct CommandOptions {
  ConfigSources sources;
  std::optional<std::string> out;
  bool exact = false;  ///< expected counts instead of Poisson draws
  int threads = 1;

  double theta_s = 0.0;  ///< rate: projection angles, degrees
  double theta_i = 0.0;
  std::string basis = "H-V";                ///< fringe
  std::optional<std::string> fit_out;       ///< fringe: FringeFit JSON file
  std::string method = "mle";               ///< tomo: mle | linear
  std::optional<std::string> counts_path;   ///< tomo: label -> counts JSON instead of a simulation
  std::string plan = "chsh";                ///< simulate: chsh | tomo | fringe-hv | fringe-ad
};

/// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitConfig = 2;

/// Commands: rate, fringe, chsh, tomo, sweep, simulate, calibrate.
const std::vector<std::string>& command_names();

/// Runs one command. The JSON summary goes to out, diagnostics and the seed of
/// randomized runs to err. Returns an exit code; nothing is thrown.
int run_command(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err);

}  // namespace ledspdc
