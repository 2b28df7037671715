#include "ledspdc/calibration.hpp"

#include <cmath>

#include "ledspdc/chsh.hpp"
#include "ledspdc/errors.hpp"
#include "ledspdc/expsim.hpp"

namespace ledspdc {

namespace {

template <typename F>
double bisect(F&& f, double lo, double hi, double target, int iterations = 200) {
  const bool increasing = f(hi) >= f(lo);
  for (int i = 0; i < iterations && hi - lo > 1e-16; ++i) {
    const double mid = 0.5 * (lo + hi);
    if ((f(mid) < target) == increasing) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

AcquisitionPlan unit_plan(std::vector<AnalyzerSetting> settings) {
  AcquisitionPlan plan;
  plan.settings = std::move(settings);
  plan.duration_s = 60.0;
  plan.repeats = 1;
  plan.peak_coincidence_rate = 1.0;
  plan.singles_rate_s = 0.0;
  plan.singles_rate_i = 0.0;
  return plan;
}

}  // namespace

double exact_visibility(const TwoQubitState& state, FringeBasis basis, const std::vector<double>& angles) {
  const auto model = ProbabilityModel::from_state(state);
  const auto records = simulate_exact(model, unit_plan(fringe_settings(basis, angles)));
  return fit_fringe(fringe_points(records), basis).visibility;
}

double exact_chsh(const TwoQubitState& state) {
  const auto model = ProbabilityModel::from_state(state);
  return chsh(simulate_exact(model, unit_plan(chsh_settings()))).s;
}

TwoQubitState x_state(double mu, double w, double c1, double c2) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("x_state: mu must lie in [0, 1]");
  const double a = c1 * c1;
  const double b = c2 * c2;
  Matrix4c rho = Matrix4c::Zero();
  rho(kHV, kHV) = a;
  rho(kVH, kVH) = b;
  rho(kHV, kVH) = rho(kVH, kHV) = mu * std::sqrt(a * b);
  return depolarize(TwoQubitState::from_numerical(rho / (a + b)), w);
}

VisibilityCalibration fit_visibilities(double v_hv, double v_ad, double c1, double c2) {
  if (!(v_hv > 0.0 && v_hv <= 1.0) || !(v_ad >= 0.0 && v_ad <= 1.0)) {
    throw DomainError("visibility targets must lie in (0, 1]");
  }
  auto vis_hv = [&](double w) { return exact_visibility(x_state(0.0, w, c1, c2), FringeBasis::hv); };
  if (vis_hv(0.0) < v_hv) throw DomainError("H-V visibility target exceeds the noiseless state");
  const double w = bisect(vis_hv, 0.0, 1.0 - 1e-12, v_hv);
  auto vis_ad = [&](double mu) { return exact_visibility(x_state(mu, w, c1, c2), FringeBasis::ad); };
  if (vis_ad(1.0) < v_ad) throw DomainError("A-D visibility target needs coherence above 1");
  VisibilityCalibration out;
  out.depolarization = w;
  out.mu_eff = bisect(vis_ad, 0.0, 1.0, v_ad);
  const TwoQubitState st = x_state(out.mu_eff, w, c1, c2);
  out.v_hv = exact_visibility(st, FringeBasis::hv);
  out.v_ad = exact_visibility(st, FringeBasis::ad);
  return out;
}

double mu_for_chsh(const SpdcSource& source, double target_s) {
  auto s_of = [&](double mu) {
    SpdcSource src = source;
    src.coherence.mode = CoherenceMode::calibrated;
    src.coherence.mu = mu;
    return exact_chsh(collected_state(src).state);
  };
  if (!(s_of(0.0) <= target_s && target_s <= s_of(1.0))) {
    throw DomainError("Bell parameter target " + std::to_string(target_s) + " is out of reach");
  }
  return bisect(s_of, 0.0, 1.0, target_s);
}

SpdcSource with_collection(const SpdcSource& source, const CollectionConfig& collection) {
  SpdcSource s = source;
  s.detection.collection_scale = collection.d_eff;
  return s;
}

ModeFilterCalibration fit_mode_filter(const SpdcSource& source, double mu_eff,
                                      const std::vector<CollectionConfig>& collections,
                                      const std::vector<double>& targets, std::size_t reference) {
  if (collections.size() != targets.size() || collections.empty() || reference >= collections.size()) {
    throw DomainError("fit_mode_filter: one target per collection is required");
  }
  if (!(mu_eff > 0.0 && mu_eff <= 1.0)) throw DomainError("fit_mode_filter: mu_eff must lie in (0, 1]");

  auto evaluate = [&](double log_d0) {
    ModeFilterCalibration cal;
    cal.scale = std::exp(log_d0);
    SpdcSource src = source;
    src.coherence.mode = CoherenceMode::calibrated;
    src.detection.mode_filter = {ModeFilterModel::quadrature, cal.scale};
    const double gamma_ref = src.detection.mode_filter.attenuation(collections[reference].d_eff);
    cal.mu = std::min(1.0, mu_eff / gamma_ref);
    src.coherence.mu = cal.mu;
    for (std::size_t k = 0; k < collections.size(); ++k) {
      const double c = concurrence(collected_state(with_collection(src, collections[k])).state);
      cal.concurrence.push_back(c);
      cal.residual += (c - targets[k]) * (c - targets[k]);
    }
    return cal;
  };

  // gamma_ref >= mu_eff keeps mu <= 1: D0 >= D_ref / sqrt(1/mu_eff^2 - 1).
  const double d_ref = collections[reference].d_eff;
  double lo = std::log(mu_eff < 1.0 ? d_ref / std::sqrt(1.0 / (mu_eff * mu_eff) - 1.0) : d_ref * 1e6);
  double hi = std::log(d_ref * 1e6);
  if (lo > hi) lo = hi;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - phi * (hi - lo);
  double x2 = lo + phi * (hi - lo);
  double f1 = evaluate(x1).residual;
  double f2 = evaluate(x2).residual;
  for (int i = 0; i < 200 && hi - lo > 1e-12; ++i) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - phi * (hi - lo);
      f1 = evaluate(x1).residual;
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + phi * (hi - lo);
      f2 = evaluate(x2).residual;
    }
  }
  return evaluate(0.5 * (lo + hi));
}

}  // namespace ledspdc
