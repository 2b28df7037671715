#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ledspdc/expsim.hpp"
#include "ledspdc/optimize.hpp"
#include "ledspdc/polarization.hpp"

namespace ledspdc {

struct ProjectionCount {
  std::string label;  ///< e.g. "RD": signal R, idler D
  AnalyzerSetting setting;
  double counts = 0.0;
};

/// Waveplates realizing a single-arm analyzer H, V, D, A, R or L (QWP always present).
///   H (0, 0)  V (0, 45)  D (45, 22.5)  A (45, 67.5)  R (45, 0)  L (45, 45)   as (QWP, HWP)
AnalyzerSetting tomography_setting(std::string_view label);

/// HH, HV, VV, VH, RH, RV, DV, DH, DR, DD, RD, HD, VD, VL, HL, RL.
const std::vector<std::string>& canonical_tomography_labels();

/// Records to projection counts: corrected total over repeats, negatives clamped to 0.
/// Labels come from the canonical set; unknown settings keep their printed form.
std::vector<ProjectionCount> projection_counts(const std::vector<CoincidenceRecord>& records);

/// rho = sum_v M_v n_v with M_v the dual basis of the projectors, normalized to unit trace.
/// Needs 16 settings spanning the Hermitian operators (ConfigError otherwise).
Matrix4c tomo_linear(const std::vector<ProjectionCount>& counts);

struct TomographyOptions {
  NelderMeadOptions optimizer;
  /// Added to the identity when the physical start is rank deficient.
  double regularization = 1e-8;
};

struct TomographyResult {
  Matrix4c rho_linear;
  TwoQubitState rho_mle{Matrix4c::Identity() / 4.0};
  double log_likelihood = 0.0;  ///< sum n log mu - mu, mu = N p with N profiled
  double concurrence = 0.0;
  double purity = 0.0;
  double fidelity_psi_plus = 0.0;
  long iterations = 0;
  long evaluations = 0;
  bool converged = false;
};

/// Maximum-likelihood state: rho = T^dagger T / tr with T lower triangular (16 reals),
/// Poisson likelihood with the total rate profiled out, Nelder-Mead from the physical
/// projection of the linear estimate.
TomographyResult tomo_mle(const std::vector<ProjectionCount>& counts, const TomographyOptions& options = {});

/// Poisson log-likelihood of rho with N = sum n / sum p.
double tomography_log_likelihood(const std::vector<ProjectionCount>& counts, const Matrix4c& rho);

/// Lower-triangular T with T^dagger T = rho, packed as diag(4) then (re, im) of
/// (1,0) (2,0) (3,0) (2,1) (3,1) (3,2).
Eigen::VectorXd cholesky_parameters(const Matrix4c& rho);
Matrix4c state_from_parameters(const Eigen::VectorXd& t);

}  // namespace ledspdc
