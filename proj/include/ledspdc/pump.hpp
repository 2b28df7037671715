#pragma once

#include <numbers>

namespace ledspdc {

/// Gaussian Schell-model pump at the crystal. Lengths in metres.
struct PumpBeam {
  double wavelength = 405e-9;
  double sigma_0 = 5e-3;     ///< beam size at the crystal
  double ell_c = 11e-6;      ///< transverse coherence length
  double A_p = 1.0;          ///< GSM cross-spectral-density amplitude
  double A_norm = 1.0;       ///< overall rate constant |A|^2
  double power = 290e-6;     ///< W, informational only

  double k_p() const { return 2.0 * std::numbers::pi / wavelength; }

  /// Throws DomainError naming the first offending field.
  void validate() const;
};

/// Coherence quantities of the pump after free propagation over z.
struct PropagatedPump {
  double z = 0.0;
  double sigma_z = 0.0;  ///< beam size at z
  double delta = 0.0;    ///< effective spectral width
  double b_param = 0.0;  ///< delta / (2 sigma_z), in (0, 1]
};

PropagatedPump propagate(const PumpBeam& pump, double z);

/// sigma_z = z sqrt(ell_c^2 + 4 sigma_0^2) / (2 k_p sigma_0 ell_c)
double beam_size_at(const PumpBeam& pump, double z);

/// delta = 2 ell_c sigma_z / sqrt(4 sigma_z^2 + ell_c^2)
double effective_width(double ell_c, double sigma_z);

}  // namespace ledspdc
