#pragma once

#include <Eigen/Core>

#include <complex>
#include <optional>
#include <string>

namespace ledspdc {

using Complex = std::complex<double>;
using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;
using Matrix4c = Eigen::Matrix4cd;

/// Two-photon basis index, signal first: {HH, HV, VH, VV}.
enum BasisIndex : int { kHH = 0, kHV = 1, kVH = 2, kVV = 3 };

inline constexpr const char* kBasisLabels[4] = {"HH", "HV", "VH", "VV"};

/// Physical two-qubit polarization density matrix.
///
/// Construction validates: Hermitian to 1e-12, unit trace to 1e-12, eigenvalues
/// >= -1e-10. Violations throw DomainError.
class TwoQubitState {
 public:
  explicit TwoQubitState(const Matrix4c& rho);

  /// Hermitizes and renormalizes the trace before validating. For matrices that
  /// are physical up to accumulated rounding.
  static TwoQubitState from_numerical(const Matrix4c& rho);

  const Matrix4c& rho() const { return rho_; }
  Complex operator()(int i, int j) const { return rho_(i, j); }

 private:
  Matrix4c rho_;
};

/// Waveplate angles in degrees, normalized into [0, 180). An empty QWP means
/// no quarter-wave plate in that arm.
struct AnalyzerSetting {
  double hwp_s = 0.0;
  double hwp_i = 0.0;
  std::optional<double> qwp_s;
  std::optional<double> qwp_i;

  static AnalyzerSetting hwp(double signal_deg, double idler_deg);
  static AnalyzerSetting with_qwp(double qwp_signal, double hwp_signal, double qwp_idler, double hwp_idler);

  /// Returns a copy with every angle mapped into [0, 180). Throws DomainError on non-finite input.
  AnalyzerSetting normalized() const;

  friend bool operator==(const AnalyzerSetting&, const AnalyzerSetting&) = default;
};

std::string to_string(const AnalyzerSetting& s);

/// Analyzed single-photon polarization for one arm.
///
/// Conventions: the PBS transmits H. The photon traverses the optional QWP, then
/// the HWP. A waveplate at angle t has Jones matrix R(-t) diag(1, e^{i phi}) R(t)
/// with phi = pi (HWP) or pi/2 (QWP). The analyzed ket is J_qwp^dagger J_hwp^dagger |H>,
/// so HWP t analyzes linear polarization at 2t, and (QWP 45, HWP 0) analyzes
/// R = (H + iV)/sqrt(2).
Ket2 analyzed_ket(double hwp_deg, std::optional<double> qwp_deg = std::nullopt);

/// |a><a| (x) |b><b| in the {HH, HV, VH, VV} basis.
Matrix4c projector(const AnalyzerSetting& setting);

/// |a> (x) |b>.
Ket4 product_ket(const AnalyzerSetting& setting);

/// Linear analyzer at polarization angle theta (degrees) on each arm, no waveplates.
Ket4 linear_product_ket(double theta_s_deg, double theta_i_deg);

/// tr(P rho) for the setting.
double probability(const TwoQubitState& state, const AnalyzerSetting& setting);

TwoQubitState bell_psi_plus();
TwoQubitState maximally_mixed();
TwoQubitState pure_state(const Ket4& psi);

/// p |psi+><psi+| + (1 - p) I/4.
TwoQubitState werner(double p);

/// (1 - w) rho + w I/4.
TwoQubitState depolarize(const TwoQubitState& state, double w);

/// rho~ = (sy x sy) rho* (sy x sy).
Matrix4c spin_flip(const Matrix4c& rho);

/// Wootters concurrence. With rho = W W^dagger from the eigendecomposition, the lambda_i
/// are the singular values of W^T (sy x sy) W, equal to the square roots of the
/// eigenvalues of rho rho~. Eigenvalues of rho at or below 1e-14 count as zero.
double concurrence(const TwoQubitState& state);

double purity(const TwoQubitState& state);

/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.
double fidelity(const TwoQubitState& rho, const TwoQubitState& sigma);

/// <psi|rho|psi> for a normalized pure target.
double fidelity(const TwoQubitState& rho, const Ket4& psi);

/// Largest tr((|a><a| (x) |b><b|) M) over all single-qubit pure states a, b, for
/// Hermitian M. Alternating maximization from several starts.
double max_product_expectation(const Matrix4c& m);

}  // namespace ledspdc
