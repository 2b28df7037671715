#include "ledspdc/tomography.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numeric>

#include "ledspdc/errors.hpp"
#include "ledspdc/linalg.hpp"

namespace ledspdc {

namespace {

constexpr std::array<std::pair<int, int>, 6> kOffDiagonal = {{{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}}};

std::array<Eigen::Matrix2cd, 4> paulis() {
  std::array<Eigen::Matrix2cd, 4> s;
  s[0] << 1, 0, 0, 1;
  s[1] << 0, 1, 1, 0;
  s[2] << 0, Complex(0, -1), Complex(0, 1), 0;
  s[3] << 1, 0, 0, -1;
  return s;
}

Matrix4c kron(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Matrix4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// sigma_i (x) sigma_j for i, j in 0..3, index 4 i + j.
const std::array<Matrix4c, 16>& pauli_basis() {
  static const std::array<Matrix4c, 16> basis = [] {
    const auto s = paulis();
    std::array<Matrix4c, 16> b;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) b[static_cast<std::size_t>(4 * i + j)] = kron(s[static_cast<std::size_t>(i)], s[static_cast<std::size_t>(j)]);
    return b;
  }();
  return basis;
}

struct Objective {
  std::vector<Ket4> kets;
  std::vector<double> n;
  double total = 0.0;

  explicit Objective(const std::vector<ProjectionCount>& counts) {
    for (const auto& c : counts) {
      kets.push_back(product_ket(c.setting));
      n.push_back(std::max(c.counts, 0.0));
    }
    total = std::accumulate(n.begin(), n.end(), 0.0);
  }

  // Negative profiled log-likelihood up to a constant: -sum n log p + (sum n) log(sum p).
  double operator()(const Matrix4c& rho) const {
    double sum_p = 0.0;
    double acc = 0.0;
    for (std::size_t v = 0; v < kets.size(); ++v) {
      const double p = std::max((kets[v].adjoint() * rho * kets[v])(0).real(), 1e-300);
      sum_p += p;
      if (n[v] > 0.0) acc -= n[v] * std::log(p);
    }
    return acc + total * std::log(sum_p);
  }
};

void check_counts(const std::vector<ProjectionCount>& counts) {
  if (counts.size() != 16) {
    throw ConfigError("tomography", "expected 16 projections, got " + std::to_string(counts.size()));
  }
  double total = 0.0;
  for (const auto& c : counts) {
    if (!std::isfinite(c.counts)) throw InputError("non-finite counts for projection " + c.label);
    total += std::max(c.counts, 0.0);
  }
  if (!(total > 0.0)) throw InputError("tomography needs a positive total count");
}

}  // namespace

AnalyzerSetting tomography_setting(std::string_view label) {
  if (label.size() != 2) throw InputError("projection label must have two letters: '" + std::string(label) + "'");
  auto arm = [&label](char c) -> std::pair<double, double> {
    switch (c) {
      case 'H': return {0.0, 0.0};
      case 'V': return {0.0, 45.0};
      case 'D': return {45.0, 22.5};
      case 'A': return {45.0, 67.5};
      case 'R': return {45.0, 0.0};
      case 'L': return {45.0, 45.0};
      default: throw InputError("unknown polarization '" + std::string(1, c) + "' in label '" + std::string(label) + "'");
    }
  };
  const auto [qs, hs] = arm(label[0]);
  const auto [qi, hi] = arm(label[1]);
  return AnalyzerSetting::with_qwp(qs, hs, qi, hi);
}

const std::vector<std::string>& canonical_tomography_labels() {
  static const std::vector<std::string> labels = {"HH", "HV", "VV", "VH", "RH", "RV", "DV", "DH",
                                                  "DR", "DD", "RD", "HD", "VD", "VL", "HL", "RL"};
  return labels;
}

std::vector<ProjectionCount> projection_counts(const std::vector<CoincidenceRecord>& records) {
  std::vector<ProjectionCount> out;
  out.reserve(records.size());
  for (const auto& r : records) {
    ProjectionCount pc;
    pc.setting = r.setting;
    pc.label = to_string(r.setting);
    for (const auto& label : canonical_tomography_labels()) {
      if (tomography_setting(label) == r.setting.normalized()) {
        pc.label = label;
        break;
      }
    }
    const double runs = r.raw_counts.empty() ? 1.0 : static_cast<double>(r.raw_counts.size());
    pc.counts = std::max(0.0, r.corrected_mean * runs);
    out.push_back(std::move(pc));
  }
  return out;
}

Matrix4c tomo_linear(const std::vector<ProjectionCount>& counts) {
  check_counts(counts);
  const auto& basis = pauli_basis();
  Eigen::Matrix<double, 16, 16> design;
  Eigen::Matrix<double, 16, 1> n;
  for (int v = 0; v < 16; ++v) {
    const Matrix4c p = projector(counts[static_cast<std::size_t>(v)].setting);
    for (int k = 0; k < 16; ++k) design(v, k) = (p * basis[static_cast<std::size_t>(k)]).trace().real() / 4.0;
    n(v) = std::max(counts[static_cast<std::size_t>(v)].counts, 0.0);
  }
  Eigen::FullPivLU<Eigen::Matrix<double, 16, 16>> lu(design);
  lu.setThreshold(1e-10);
  if (lu.rank() < 16) {
    throw ConfigError("tomography", "projector set is not informationally complete (rank " +
                                        std::to_string(lu.rank()) + " of 16)");
  }
  const Eigen::Matrix<double, 16, 1> r = lu.solve(n);
  Matrix4c rho = Matrix4c::Zero();
  for (int k = 0; k < 16; ++k) rho += r(k) * basis[static_cast<std::size_t>(k)] / 4.0;
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) throw InputError("linear inversion produced a non-positive trace");
  rho /= tr;
  return (rho + rho.adjoint()) / 2.0;
}

Eigen::VectorXd cholesky_parameters(const Matrix4c& rho) {
  // rho = T^dagger T, T lower: with J the exchange matrix, J rho J = L L^dagger gives T = J L^dagger J.
  Matrix4c j = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) j(i, 3 - i) = 1.0;
  Eigen::LLT<Matrix4c> llt(j * rho * j);
  if (llt.info() != Eigen::Success) throw DomainError("cholesky_parameters: matrix is not positive definite");
  const Matrix4c l = llt.matrixL();
  const Matrix4c t = j * l.adjoint() * j;
  Eigen::VectorXd out(16);
  for (int i = 0; i < 4; ++i) out(i) = t(i, i).real();
  int k = 4;
  for (const auto& [r, c] : kOffDiagonal) {
    out(k++) = t(r, c).real();
    out(k++) = t(r, c).imag();
  }
  return out;
}

Matrix4c state_from_parameters(const Eigen::VectorXd& t) {
  Matrix4c tm = Matrix4c::Zero();
  for (int i = 0; i < 4; ++i) tm(i, i) = t(i);
  int k = 4;
  for (const auto& [r, c] : kOffDiagonal) {
    tm(r, c) = Complex(t(k), t(k + 1));
    k += 2;
  }
  const Matrix4c rho = tm.adjoint() * tm;
  return rho / rho.trace().real();
}

double tomography_log_likelihood(const std::vector<ProjectionCount>& counts, const Matrix4c& rho) {
  double sum_n = 0.0;
  double sum_p = 0.0;
  std::vector<double> p(counts.size());
  for (std::size_t v = 0; v < counts.size(); ++v) {
    const Ket4 k = product_ket(counts[v].setting);
    p[v] = std::max((k.adjoint() * rho * k)(0).real(), 0.0);
    sum_p += p[v];
    sum_n += std::max(counts[v].counts, 0.0);
  }
  if (!(sum_p > 0.0)) throw DomainError("state has zero probability on every projection");
  const double big_n = sum_n / sum_p;
  double ll = 0.0;
  for (std::size_t v = 0; v < counts.size(); ++v) {
    const double n = std::max(counts[v].counts, 0.0);
    const double mu = big_n * p[v];
    if (n > 0.0) ll += n * std::log(std::max(mu, 1e-300));
    ll -= mu;
  }
  return ll;
}

TomographyResult tomo_mle(const std::vector<ProjectionCount>& counts, const TomographyOptions& options) {
  TomographyResult out;
  out.rho_linear = tomo_linear(counts);
  const Matrix4c projected = project_to_physical<double, 4>(out.rho_linear);

  Eigen::VectorXd x0;
  try {
    x0 = cholesky_parameters(projected);
  } catch (const DomainError&) {
    const Matrix4c reg = (projected + options.regularization * Matrix4c::Identity()) /
                         (1.0 + 4.0 * options.regularization);
    x0 = cholesky_parameters(reg);
  }

  const Objective objective(counts);
  const NelderMeadResult nm =
      nelder_mead([&objective](const Eigen::VectorXd& t) { return objective(state_from_parameters(t)); }, x0,
                  options.optimizer);

  Matrix4c best = state_from_parameters(nm.x);
  if (objective(projected) < nm.value) best = projected;
  out.rho_mle = TwoQubitState::from_numerical(best);
  out.log_likelihood = tomography_log_likelihood(counts, out.rho_mle.rho());
  out.concurrence = concurrence(out.rho_mle);
  out.purity = purity(out.rho_mle);
  out.fidelity_psi_plus = fidelity(out.rho_mle, bell_psi_plus());
  out.iterations = nm.iterations;
  out.evaluations = nm.evaluations;
  out.converged = nm.converged;
  return out;
}

}  // namespace ledspdc
