#pragma once

#include <string>
#include <vector>

#include "ledspdc/fringe.hpp"
#include "ledspdc/spdc.hpp"

namespace ledspdc {

/// Visibility of a noiseless fringe scan of the state over the given idler angles.
double exact_visibility(const TwoQubitState& state, FringeBasis basis,
                        const std::vector<double>& angles = default_fringe_angles());

/// Exact-probability Bell parameter of a state at the 16 CHSH settings.
double exact_chsh(const TwoQubitState& state);

/// X-state on {HV, VH} with populations c1^2 : c2^2 and relative coherence mu, then
/// depolarized by w. This is the form of the collected state.
TwoQubitState x_state(double mu, double w, double c1 = 1.0, double c2 = 1.0);

struct VisibilityCalibration {
  double mu_eff = 0.0;          ///< coherence seen through the collection, mu * gamma
  double depolarization = 0.0;  ///< w
  double v_hv = 0.0;            ///< achieved exact visibilities
  double v_ad = 0.0;
};

/// Solves (mu_eff, w) so the exact H-V and A-D visibilities of x_state match the targets.
/// Throws DomainError when the targets are out of reach.
VisibilityCalibration fit_visibilities(double v_hv, double v_ad, double c1 = 1.0, double c2 = 1.0);

/// Calibrated-mode mu of the source so that the exact Bell parameter of its collected
/// state equals target_s. Throws DomainError when target_s is out of reach.
double mu_for_chsh(const SpdcSource& source, double target_s);

struct ModeFilterCalibration {
  double scale = 0.0;              ///< D0, metres
  double mu = 0.0;                 ///< calibrated-mode mu at the reference geometry
  std::vector<double> concurrence; ///< collected-state concurrence per collection
  double residual = 0.0;           ///< sum of squared concurrence misses
};

/// One D0 for all collections: golden-section least squares in log D0 on the concurrence
/// targets, with mu = mu_eff / gamma(reference collection) so the reference stays pinned
/// at the visibility calibration. The source supplies pump, geometry, c1, c2 and w.
ModeFilterCalibration fit_mode_filter(const SpdcSource& source, double mu_eff,
                                      const std::vector<CollectionConfig>& collections,
                                      const std::vector<double>& targets, std::size_t reference = 0);

/// Source with the given collection selected.
SpdcSource with_collection(const SpdcSource& source, const CollectionConfig& collection);

}  // namespace ledspdc
