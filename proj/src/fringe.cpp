#include "ledspdc/fringe.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ledspdc/errors.hpp"

namespace ledspdc {

namespace {

constexpr double kRad = std::numbers::pi / 180.0;

double wrap90(double deg) {
  double r = std::fmod(deg, 90.0);
  if (r < 0.0) r += 90.0;
  if (r >= 90.0) r = 0.0;
  return r;
}

double model(const Eigen::Vector3d& p, double theta) {
  const double s = std::sin(2.0 * (theta - p(2)) * kRad);
  return p(0) * s * s + p(1);
}

double sum_squares(const Eigen::Vector3d& p, const std::vector<FringePoint>& pts) {
  double ss = 0.0;
  for (const auto& pt : pts) {
    const double r = model(p, pt.angle_deg) - pt.mean;
    ss += r * r;
  }
  return ss;
}

void check_coverage(const std::vector<FringePoint>& pts) {
  std::vector<double> angles;
  for (const auto& p : pts) {
    if (!std::isfinite(p.angle_deg) || !std::isfinite(p.mean)) throw InputError("fringe point is not finite");
    angles.push_back(p.angle_deg);
  }
  std::sort(angles.begin(), angles.end());
  angles.erase(std::unique(angles.begin(), angles.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-9; }),
               angles.end());
  if (angles.size() < 8) {
    throw InputError("fringe fit needs at least 8 distinct angles, got " + std::to_string(angles.size()));
  }
  if (angles.back() - angles.front() < 90.0 - 1e-9) {
    throw InputError("fringe angles must span at least 90 degrees");
  }
}

}  // namespace

std::string to_string(FringeBasis basis) { return basis == FringeBasis::hv ? "H-V" : "A-D"; }

FringeBasis parse_fringe_basis(const std::string& name) {
  if (name == "H-V" || name == "HV" || name == "hv") return FringeBasis::hv;
  if (name == "A-D" || name == "AD" || name == "ad") return FringeBasis::ad;
  throw InputError("unknown fringe basis '" + name + "' (expected H-V or A-D)");
}

std::vector<double> default_fringe_angles() {
  std::vector<double> out;
  for (int k = 0; k <= 12; ++k) out.push_back(7.5 * k);
  return out;
}

std::vector<AnalyzerSetting> fringe_settings(FringeBasis basis, const std::vector<double>& idler_angles) {
  const double signal = basis == FringeBasis::hv ? 0.0 : 22.5;
  std::vector<AnalyzerSetting> out;
  out.reserve(idler_angles.size());
  for (double a : idler_angles) {
    out.push_back(AnalyzerSetting::hwp(signal, a));
  }
  return out;
}

std::vector<FringePoint> fringe_points(const std::vector<CoincidenceRecord>& records) {
  std::vector<FringePoint> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.setting.hwp_i, r.corrected_mean, r.corrected_sem});
  return out;
}

double fringe_model(const FringeFit& fit, double angle_deg) {
  return model(Eigen::Vector3d(fit.amplitude, fit.offset, fit.phase), angle_deg);
}

FringeFit fit_fringe(const std::vector<FringePoint>& points, FringeBasis basis) {
  check_coverage(points);
  const auto m = points.size();

  // Harmonic start: y = c0 + c1 cos 4t + c2 sin 4t is linear in (c0, c1, c2).
  Eigen::MatrixXd design(m, 3);
  Eigen::VectorXd y(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = 4.0 * points[k].angle_deg * kRad;
    design.row(static_cast<Eigen::Index>(k)) << 1.0, std::cos(t), std::sin(t);
    y(static_cast<Eigen::Index>(k)) = points[k].mean;
  }
  const Eigen::Vector3d c = design.colPivHouseholderQr().solve(y);
  const double half_amp = std::hypot(c(1), c(2));
  Eigen::Vector3d p(2.0 * half_amp, c(0) - half_amp, 0.0);
  if (half_amp > 0.0) p(2) = std::atan2(-c(2), -c(1)) / (4.0 * kRad);

  double ss = sum_squares(p, points);
  const double scale = std::max(y.squaredNorm(), 1e-300);
  double lambda = 1e-3;
  int iter = 0;
  bool converged = false;
  for (; iter < 500; ++iter) {
    if (ss <= 1e-28 * scale) {
      converged = true;
      break;
    }
    Eigen::MatrixXd jac(m, 3);
    Eigen::VectorXd res(m);
    for (std::size_t k = 0; k < m; ++k) {
      const double u = 2.0 * (points[k].angle_deg - p(2)) * kRad;
      const double s = std::sin(u);
      const auto row = static_cast<Eigen::Index>(k);
      jac(row, 0) = s * s;
      jac(row, 1) = 1.0;
      jac(row, 2) = -2.0 * kRad * p(0) * std::sin(2.0 * u);
      res(row) = points[k].mean - model(p, points[k].angle_deg);
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d g = jac.transpose() * res;
    if (g.norm() <= 1e-14 * std::sqrt(scale) * std::max(1.0, jtj.norm())) {
      converged = true;
      break;
    }
    const double floor = 1e-12 * std::max(jtj.trace(), 1e-300);
    bool accepted = false;
    while (lambda < 1e16) {
      Eigen::Matrix3d a = jtj;
      for (int i = 0; i < 3; ++i) a(i, i) += lambda * std::max(jtj(i, i), floor);
      const Eigen::Vector3d step = a.ldlt().solve(g);
      const Eigen::Vector3d trial = p + step;
      const double trial_ss = sum_squares(trial, points);
      if (trial_ss <= ss) {
        const double gain = ss - trial_ss;
        p = trial;
        ss = trial_ss;
        lambda = std::max(lambda / 10.0, 1e-12);
        accepted = true;
        if (gain <= 1e-14 * std::max(ss, 1e-300) || step.norm() <= 1e-14 * std::max(1.0, p.norm())) {
          converged = true;
        }
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) converged = true;
    if (converged) {
      ++iter;
      break;
    }
  }
  const double rms = std::sqrt(ss / static_cast<double>(m));
  if (!converged) throw FitError("fringe fit did not converge in 500 iterations (rms " + std::to_string(rms) + ")", rms);

  if (p(0) < 0.0) {
    p(1) += p(0);
    p(0) = -p(0);
    p(2) += 45.0;
  }
  FringeFit fit;
  fit.basis = basis;
  fit.amplitude = p(0);
  fit.offset = p(1);
  fit.phase = wrap90(p(2));
  const double denom = fit.amplitude + 2.0 * fit.offset;
  fit.visibility = denom != 0.0 ? fit.amplitude / denom : 0.0;
  fit.residual_rms = rms;
  fit.iterations = iter;
  return fit;
}

}  // namespace ledspdc
