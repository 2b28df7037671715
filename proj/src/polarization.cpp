#include "ledspdc/polarization.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ledspdc/errors.hpp"
#include "ledspdc/linalg.hpp"

namespace ledspdc {

namespace {

constexpr double kPi = std::numbers::pi;

// Eigenvalues of rho at or below this are treated as exact zeros by concurrence().
constexpr double kRankTolerance = 1e-14;

double deg2rad(double deg) { return deg * kPi / 180.0; }

double wrap_degrees(double deg) {
  if (!std::isfinite(deg)) throw DomainError("analyzer angle must be finite");
  double r = std::fmod(deg, 180.0);
  if (r < 0.0) r += 180.0;
  if (r >= 180.0) r = 0.0;
  return r;
}

Eigen::Matrix2cd rotation(double t) {
  Eigen::Matrix2cd r;
  r << std::cos(t), std::sin(t), -std::sin(t), std::cos(t);
  return r;
}

Eigen::Matrix2cd waveplate(double angle_deg, double retardance) {
  const double t = deg2rad(angle_deg);
  Eigen::Matrix2cd d = Eigen::Matrix2cd::Zero();
  d(0, 0) = 1.0;
  d(1, 1) = std::polar(1.0, retardance);
  return rotation(-t) * d * rotation(t);
}

Matrix4c sigma_y_y() {
  // sigma_y (x) sigma_y is real: anti-diagonal (-1, 1, 1, -1).
  Matrix4c m = Matrix4c::Zero();
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

}  // namespace

TwoQubitState::TwoQubitState(const Matrix4c& rho) : rho_(rho) {
  if (!rho.allFinite()) throw DomainError("density matrix has non-finite entries");
  const double herm = hermiticity_defect(rho);
  if (herm > 1e-12) {
    throw DomainError("density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
  }
  const Complex tr = rho.trace();
  if (std::abs(tr.real() - 1.0) > 1e-12 || std::abs(tr.imag()) > 1e-12) {
    throw DomainError("density matrix trace is not 1 (got " + std::to_string(tr.real()) + ")");
  }
  const auto eig = eig_hermitian<double, 4>(rho);
  if (eig.values(3) < -1e-10) {
    throw DomainError("density matrix is not positive semidefinite (min eigenvalue " +
                      std::to_string(eig.values(3)) + ")");
  }
}

TwoQubitState TwoQubitState::from_numerical(const Matrix4c& rho) {
  Matrix4c h = (rho + rho.adjoint()) / 2.0;
  const double tr = h.trace().real();
  if (!(tr > 0.0)) throw DomainError("density matrix has non-positive trace");
  return TwoQubitState(h / tr);
}

AnalyzerSetting AnalyzerSetting::hwp(double signal_deg, double idler_deg) {
  return AnalyzerSetting{signal_deg, idler_deg, std::nullopt, std::nullopt}.normalized();
}

AnalyzerSetting AnalyzerSetting::with_qwp(double qwp_signal, double hwp_signal, double qwp_idler,
                                          double hwp_idler) {
  return AnalyzerSetting{hwp_signal, hwp_idler, qwp_signal, qwp_idler}.normalized();
}

AnalyzerSetting AnalyzerSetting::normalized() const {
  AnalyzerSetting out;
  out.hwp_s = wrap_degrees(hwp_s);
  out.hwp_i = wrap_degrees(hwp_i);
  if (qwp_s) out.qwp_s = wrap_degrees(*qwp_s);
  if (qwp_i) out.qwp_i = wrap_degrees(*qwp_i);
  return out;
}

std::string to_string(const AnalyzerSetting& s) {
  std::ostringstream os;
  os << "(";
  if (s.qwp_s) os << "q" << *s.qwp_s << " ";
  os << "h" << s.hwp_s << " | ";
  if (s.qwp_i) os << "q" << *s.qwp_i << " ";
  os << "h" << s.hwp_i << ")";
  return os.str();
}

Ket2 analyzed_ket(double hwp_deg, std::optional<double> qwp_deg) {
  Ket2 ket = waveplate(hwp_deg, kPi).adjoint() * Ket2(1.0, 0.0);
  if (qwp_deg) ket = waveplate(*qwp_deg, kPi / 2.0).adjoint() * ket;
  return ket;
}

Ket4 product_ket(const AnalyzerSetting& setting) {
  const Ket2 a = analyzed_ket(setting.hwp_s, setting.qwp_s);
  const Ket2 b = analyzed_ket(setting.hwp_i, setting.qwp_i);
  Ket4 v;
  v << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
  return v;
}

Ket4 linear_product_ket(double theta_s_deg, double theta_i_deg) {
  const double ts = deg2rad(theta_s_deg);
  const double ti = deg2rad(theta_i_deg);
  Ket4 v;
  v << std::cos(ts) * std::cos(ti), std::cos(ts) * std::sin(ti), std::sin(ts) * std::cos(ti),
      std::sin(ts) * std::sin(ti);
  return v;
}

Matrix4c projector(const AnalyzerSetting& setting) {
  const Ket4 v = product_ket(setting);
  return v * v.adjoint();
}

double probability(const TwoQubitState& state, const AnalyzerSetting& setting) {
  const Ket4 v = product_ket(setting);
  return std::max(0.0, (v.adjoint() * state.rho() * v)(0).real());
}

TwoQubitState bell_psi_plus() {
  Matrix4c rho = Matrix4c::Zero();
  rho(kHV, kHV) = 0.5;
  rho(kVH, kVH) = 0.5;
  rho(kHV, kVH) = 0.5;
  rho(kVH, kHV) = 0.5;
  return TwoQubitState(rho);
}

TwoQubitState maximally_mixed() { return TwoQubitState(Matrix4c::Identity() / 4.0); }

TwoQubitState pure_state(const Ket4& psi) {
  const double n = psi.norm();
  if (!(n > 0.0)) throw DomainError("pure_state: zero ket");
  const Ket4 u = psi / n;
  return TwoQubitState::from_numerical(u * u.adjoint());
}

TwoQubitState werner(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("werner: p must lie in [0, 1]");
  return depolarize(bell_psi_plus(), 1.0 - p);
}

TwoQubitState depolarize(const TwoQubitState& state, double w) {
  if (!(w >= 0.0 && w <= 1.0)) throw DomainError("depolarize: fraction must lie in [0, 1]");
  return TwoQubitState::from_numerical((1.0 - w) * state.rho() + w * Matrix4c::Identity() / 4.0);
}

Matrix4c spin_flip(const Matrix4c& rho) {
  const Matrix4c yy = sigma_y_y();
  return yy * rho.conjugate() * yy;
}

double concurrence(const TwoQubitState& state) {
  const auto eig = eig_hermitian<double, 4>(state.rho());
  Matrix4c w = Matrix4c::Zero();
  for (int k = 0; k < 4; ++k) {
    if (eig.values(k) > kRankTolerance) w.col(k) = eig.vectors.col(k) * std::sqrt(eig.values(k));
  }
  const Matrix4c tau = w.transpose() * sigma_y_y() * w;
  const Matrix4c gram = tau.adjoint() * tau;
  const auto sv = eig_hermitian<double, 4>((gram + gram.adjoint()) / 2.0);
  std::array<double, 4> lambda;
  for (int k = 0; k < 4; ++k) lambda[k] = std::sqrt(std::max(0.0, sv.values(k)));
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double purity(const TwoQubitState& state) { return (state.rho() * state.rho()).trace().real(); }

double fidelity(const TwoQubitState& rho, const TwoQubitState& sigma) {
  const Matrix4c root = sqrt_psd<double, 4>(rho.rho());
  const Matrix4c inner = root * sigma.rho() * root;
  const auto eig = eig_hermitian<double, 4>((inner + inner.adjoint()) / 2.0);
  double tr = 0.0;
  for (int k = 0; k < 4; ++k) tr += std::sqrt(std::max(0.0, eig.values(k)));
  return std::min(1.0, tr * tr);
}

double fidelity(const TwoQubitState& rho, const Ket4& psi) {
  const Ket4 u = psi.normalized();
  return (u.adjoint() * rho.rho() * u)(0).real();
}

double max_product_expectation(const Matrix4c& m) {
  if (hermiticity_defect(m) > 1e-10 * std::max(1.0, m.norm())) {
    throw DomainError("max_product_expectation: operator is not Hermitian");
  }
  const std::array<Ket2, 4> starts = {Ket2(1.0, 0.0), Ket2(0.0, 1.0),
                                      Ket2(1.0, 1.0).normalized(), Ket2(1.0, Complex(0.0, 1.0)).normalized()};
  // Reduced 2x2 operators: contract one arm with a fixed ket.
  auto reduce_on_idler = [&m](const Ket2& b) {
    Eigen::Matrix2cd r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Complex s = 0.0;
        for (int k = 0; k < 2; ++k)
          for (int l = 0; l < 2; ++l) s += std::conj(b(k)) * m(2 * i + k, 2 * j + l) * b(l);
        r(i, j) = s;
      }
    return r;
  };
  auto reduce_on_signal = [&m](const Ket2& a) {
    Eigen::Matrix2cd r;
    for (int k = 0; k < 2; ++k)
      for (int l = 0; l < 2; ++l) {
        Complex s = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) s += std::conj(a(i)) * m(2 * i + k, 2 * j + l) * a(j);
        r(k, l) = s;
      }
    return r;
  };

  double best = -std::numeric_limits<double>::infinity();
  for (const Ket2& a0 : starts) {
    for (const Ket2& b0 : starts) {
      Ket2 a = a0;
      Ket2 b = b0;
      double value = -std::numeric_limits<double>::infinity();
      for (int iter = 0; iter < 500; ++iter) {
        const auto ea = eig_hermitian<double, 2>(reduce_on_idler(b));
        a = ea.vectors.col(0);
        const auto eb = eig_hermitian<double, 2>(reduce_on_signal(a));
        b = eb.vectors.col(0);
        const double next = eb.values(0);
        if (std::abs(next - value) <= 1e-15 * std::max(1.0, std::abs(next))) {
          value = next;
          break;
        }
        value = next;
      }
      best = std::max(best, value);
    }
  }
  return best;
}

}  // namespace ledspdc
