#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ledspdc/chsh.hpp"
#include "ledspdc/expsim.hpp"
#include "ledspdc/pump.hpp"
#include "ledspdc/spdc.hpp"

namespace ledspdc {

/// Which probability surface the randomized commands sample.
enum class StateKind {
  source,    ///< collected state of the configured source
  psi_plus,  ///< ideal (HV + VH)/sqrt(2)
  rate_law,  ///< rate law directly, HWP-only settings
};

std::string to_string(StateKind kind);

struct SweepGrid {
  double b_min = 1e-3;
  double b_max = 0.99;
  int points = 30;

  /// Geometric grid from b_min to b_max.
  std::vector<double> values() const;
};

/// Calibration targets, used by the calibrate command and the preset consistency tests.
struct CalibrationTargets {
  double v_hv = 0.86;
  double v_ad = 0.82;
  double bell_theory = 2.61;
  std::vector<double> concurrence = {0.63, 0.54, 0.35};
};

struct RunConfig {
  std::string preset;
  PumpBeam pump;
  double z = 0.1;
  DetectionParams detection;
  std::string collection = "SMF";
  std::vector<CollectionConfig> collections = {
      {"SMF", 5e-3, 5e-6}, {"MMF50", 0.5e-3, 50e-6}, {"MMF125", 0.2e-3, 125e-6}};
  CoherenceMode mode = CoherenceMode::calibrated;
  double mu = 1.0;
  StateKind state = StateKind::source;
  AcquisitionPlan plan;  ///< settings are filled per command
  SigmaMethod sigma_method = SigmaMethod::poisson;
  int bootstrap_samples = 1000;
  std::vector<double> fringe_angles = {0.0, 7.5, 15.0, 22.5, 30.0, 37.5, 45.0, 52.5, 60.0, 67.5, 75.0, 82.5, 90.0};
  SweepGrid sweep;
  CalibrationTargets targets;
  std::uint64_t seed = 2022;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// Overlays a JSON document onto cfg. Unknown keys and malformed values throw ConfigError
/// with the dotted field path. Lengths accept unit suffixes ("11um") or plain metres.
void apply_config_json(RunConfig& cfg, const nlohmann::json& doc, bool allow_preset_key = true);

/// Directory holding <name>.json presets: $LEDSPDC_PRESET_DIR, else the source tree's presets/.
std::string preset_directory();
std::vector<std::string> preset_names();

struct ConfigSources {
  std::optional<std::string> config_path;
  std::optional<std::string> preset;       ///< overrides the config's "preset" key
  std::optional<std::uint64_t> seed;       ///< overrides LEDSPDC_SEED and the config
  std::optional<std::string> mode;         ///< literal | calibrated
};

/// Built-in defaults, then the preset ("default" unless named), then the config file,
/// then LEDSPDC_SEED, then explicit overrides.
RunConfig load_run_config(const ConfigSources& sources);

/// Collection entry selected by cfg.collection.
const CollectionConfig& selected_collection(const RunConfig& cfg);

/// Source at the selected collection; the calibrated reference is the configured geometry.
SpdcSource make_source(const RunConfig& cfg);

}  // namespace ledspdc
