#pragma once

#include <string>
#include <vector>

#include "ledspdc/polarization.hpp"
#include "ledspdc/pump.hpp"

namespace ledspdc {

/// Coherence attenuation from multimode collection.
enum class ModeFilterModel {
  none,        ///< gamma = 1
  quadrature,  ///< gamma(D) = 1 / sqrt(1 + (D / D0)^2)
};

struct ModeFilter {
  ModeFilterModel model = ModeFilterModel::quadrature;
  double scale = 1.0;  ///< D0, metres

  double attenuation(double collection_scale) const;
};

struct DetectionParams {
  double c1 = 1.0;  ///< efficiency of the H_s V_i path
  double c2 = 1.0;  ///< efficiency of the V_s H_i path
  double r_s = 0.0;
  double r_i = 0.0;
  double collection_scale = 5e-6;  ///< effective collection diameter D, metres
  ModeFilter mode_filter;
  /// Fraction of white noise (rho -> (1-w) rho + w I/4) seen by the analyzers.
  double depolarization = 0.0;

  void validate() const;
};

/// How the HV <-> VH coherence of the rate law is evaluated.
enum class CoherenceMode {
  literal,     ///< the cross-term prefactor exactly as written, in SI units
  calibrated,  ///< cross/diagonal ratio replaced by a dimensionless mu
};

struct CoherenceModel {
  CoherenceMode mode = CoherenceMode::literal;
  /// Calibrated-mode coherence at the reference geometry.
  double mu = 1.0;
  /// Literal coherence ratio of the reference geometry; mu scales with
  /// literal_ratio(current) / reference_ratio away from it.
  double reference_ratio = 0.0;
};

std::string to_string(CoherenceMode mode);
CoherenceMode parse_coherence_mode(const std::string& name);

struct SpdcSource {
  PumpBeam pump;
  PropagatedPump propagated;
  DetectionParams detection;
  CoherenceModel coherence;

  /// Propagates the pump over z and pins the calibrated-mode reference to this geometry.
  static SpdcSource make(const PumpBeam& pump, double z, const DetectionParams& detection,
                         CoherenceMode mode = CoherenceMode::literal, double mu = 1.0);

  /// Same source with a different pump, keeping z, detection and the coherence reference.
  SpdcSource with_pump(const PumpBeam& new_pump) const;
};

/// Coefficients of the polarization-resolved rate, all sharing one global prefactor.
///   R = prefactor * | cross sin2ts sin2ti + diag (c1^2 cos^2 ts sin^2 ti + c2^2 sin^2 ts cos^2 ti) |
struct RateCoefficients {
  double prefactor = 0.0;  ///< A_norm * [A_p pi ell_c sigma0^2 / (z sqrt(4 sigma0^2 + ell_c^2))]^2
  double cross = 0.0;      ///< coefficient of sin 2ts sin 2ti (before C1 C2)
  double diag = 0.0;       ///< sqrt(2 pi / (k_p^2 delta^2))
  double coherence = 0.0;  ///< c / sqrt(ab) after clamping
  bool clamped = false;
};

/// Literal ratio c / sqrt(ab) = sqrt(pi/2) z^2 / (k_p sigma_z) for a geometry.
double literal_coherence_ratio(const PumpBeam& pump, const PropagatedPump& propagated);

RateCoefficients rate_coefficients(const SpdcSource& source);

/// Coincidence rate for polarization projection angles theta_s, theta_i (degrees).
/// These are analyzer polarization angles, i.e. twice the HWP angle.
double rate(const SpdcSource& source, double theta_s_deg, double theta_i_deg);

struct EffectiveState {
  TwoQubitState state;
  bool clamped = false;
};

/// X-state on {HV, VH} whose linear-analyzer projections are proportional to rate().
EffectiveState effective_state(const SpdcSource& source);

/// Multiplies the HV <-> VH coherence by gamma(collection_scale); diagonal untouched.
TwoQubitState apply_mode_filter(const TwoQubitState& state, const DetectionParams& detection);

/// The state the analyzers see: effective state, mode filter, then depolarization.
EffectiveState collected_state(const SpdcSource& source);

/// Collection configuration: a printed label (opaque) mapped to an effective diameter.
struct CollectionConfig {
  std::string name;
  double label = 0.0;  ///< metres, as printed
  double d_eff = 0.0;  ///< metres
};

struct SweepRow {
  double b = 0.0;
  double ell_c = 0.0;
  std::string collection;
  double collection_scale = 0.0;
  double concurrence = 0.0;
  bool clamped = false;
};

/// Coherence length giving the requested B at fixed z and sigma_0, by bisection in log(ell_c).
double ell_c_for_b(const PumpBeam& pump, double z, double b);

/// Concurrence of the collected state over a B grid for each collection configuration.
/// Rows are ordered by grid index, then by configuration order. threads <= 1 runs inline.
std::vector<SweepRow> concurrence_vs_b(const SpdcSource& source, const std::vector<double>& b_grid,
                                       const std::vector<CollectionConfig>& collections, int threads = 1);

}  // namespace ledspdc
