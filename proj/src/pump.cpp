#include "ledspdc/pump.hpp"

#include <cmath>
#include <string>

#include "ledspdc/errors.hpp"

namespace ledspdc {

namespace {

void require_positive(double value, const char* field) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(field) + " must be positive and finite, got " + std::to_string(value));
  }
}

}  // namespace

void PumpBeam::validate() const {
  require_positive(wavelength, "pump.wavelength");
  require_positive(sigma_0, "pump.sigma0");
  require_positive(ell_c, "pump.ell_c");
  require_positive(A_p, "pump.A_p");
  if (!(A_norm >= 0.0) || !std::isfinite(A_norm)) throw DomainError("pump.A_norm must be non-negative");
}

double beam_size_at(const PumpBeam& pump, double z) {
  return z * std::sqrt(pump.ell_c * pump.ell_c + 4.0 * pump.sigma_0 * pump.sigma_0) /
         (2.0 * pump.k_p() * pump.sigma_0 * pump.ell_c);
}

double effective_width(double ell_c, double sigma_z) {
  return 2.0 * ell_c * sigma_z / std::sqrt(4.0 * sigma_z * sigma_z + ell_c * ell_c);
}

PropagatedPump propagate(const PumpBeam& pump, double z) {
  pump.validate();
  require_positive(z, "z");
  PropagatedPump out;
  out.z = z;
  out.sigma_z = beam_size_at(pump, z);
  out.delta = effective_width(pump.ell_c, out.sigma_z);
  // delta / (2 sigma_z), in a form bounded by 1 under rounding
  out.b_param = pump.ell_c / std::sqrt(4.0 * out.sigma_z * out.sigma_z + pump.ell_c * pump.ell_c);
  return out;
}

}  // namespace ledspdc
