#pragma once

#include <string>
#include <vector>

#include "ledspdc/expsim.hpp"

namespace ledspdc {

/// H-V: signal HWP at 0 deg. A-D: signal HWP at 22.5 deg. The idler HWP is scanned.
enum class FringeBasis { hv, ad };

std::string to_string(FringeBasis basis);
FringeBasis parse_fringe_basis(const std::string& name);

struct FringePoint {
  double angle_deg = 0.0;  ///< scanned idler HWP angle
  double mean = 0.0;
  double sem = 0.0;
};

/// C(theta) = amplitude * sin^2(2 (theta - phase)) + offset, theta and phase in degrees.
struct FringeFit {
  FringeBasis basis = FringeBasis::hv;
  double amplitude = 0.0;
  double offset = 0.0;
  double phase = 0.0;       ///< in [0, 90)
  double visibility = 0.0;  ///< (max - min) / (max + min) of the fitted curve
  double residual_rms = 0.0;
  int iterations = 0;
};

/// 0, 7.5, ..., 90 degrees.
std::vector<double> default_fringe_angles();

std::vector<AnalyzerSetting> fringe_settings(FringeBasis basis, const std::vector<double>& idler_angles);

/// Idler HWP angle, corrected mean and sem of each record.
std::vector<FringePoint> fringe_points(const std::vector<CoincidenceRecord>& records);

/// Levenberg-Marquardt least squares on (amplitude, offset, phase), started from the
/// harmonic projection onto {1, cos 4 theta, sin 4 theta}. Needs >= 8 distinct angles
/// spanning >= 90 degrees (InputError). Throws FitError after 500 iterations.
FringeFit fit_fringe(const std::vector<FringePoint>& points, FringeBasis basis);

double fringe_model(const FringeFit& fit, double angle_deg);

}  // namespace ledspdc
