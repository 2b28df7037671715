#include "ledspdc/spdc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>
#include <thread>

#include "ledspdc/errors.hpp"

namespace ledspdc {

namespace {

constexpr double kPi = std::numbers::pi;

double deg2rad(double deg) { return deg * kPi / 180.0; }

double b_of(const PumpBeam& pump, double z) { return propagate(pump, z).b_param; }

}  // namespace

double ModeFilter::attenuation(double collection_scale) const {
  switch (model) {
    case ModeFilterModel::none:
      return 1.0;
    case ModeFilterModel::quadrature: {
      const double x = collection_scale / scale;
      return 1.0 / std::sqrt(1.0 + x * x);
    }
  }
  return 1.0;
}

void DetectionParams::validate() const {
  if (!(c1 > 0.0 && c1 <= 1.0)) throw DomainError("detection.c1 must lie in (0, 1]");
  if (!(c2 > 0.0 && c2 <= 1.0)) throw DomainError("detection.c2 must lie in (0, 1]");
  if (!std::isfinite(r_s) || !std::isfinite(r_i)) throw DomainError("detection positions must be finite");
  if (!(collection_scale > 0.0) || !std::isfinite(collection_scale)) {
    throw DomainError("detection.collection_scale must be positive");
  }
  if (mode_filter.model != ModeFilterModel::none && !(mode_filter.scale > 0.0)) {
    throw DomainError("detection.mode_filter.scale must be positive");
  }
  if (!(depolarization >= 0.0 && depolarization < 1.0)) {
    throw DomainError("detection.depolarization must lie in [0, 1)");
  }
}

std::string to_string(CoherenceMode mode) {
  return mode == CoherenceMode::literal ? "literal" : "calibrated";
}

CoherenceMode parse_coherence_mode(const std::string& name) {
  if (name == "literal") return CoherenceMode::literal;
  if (name == "calibrated") return CoherenceMode::calibrated;
  throw DomainError("unknown coherence mode '" + name + "' (expected literal or calibrated)");
}

SpdcSource SpdcSource::make(const PumpBeam& pump, double z, const DetectionParams& detection,
                            CoherenceMode mode, double mu) {
  detection.validate();
  if (!(mu >= 0.0 && mu <= 1.0)) throw DomainError("coherence.mu must lie in [0, 1]");
  SpdcSource s;
  s.pump = pump;
  s.propagated = propagate(pump, z);
  s.detection = detection;
  s.coherence.mode = mode;
  s.coherence.mu = mu;
  s.coherence.reference_ratio = literal_coherence_ratio(pump, s.propagated);
  return s;
}

SpdcSource SpdcSource::with_pump(const PumpBeam& new_pump) const {
  SpdcSource s = *this;
  s.pump = new_pump;
  s.propagated = propagate(new_pump, propagated.z);
  return s;
}

double literal_coherence_ratio(const PumpBeam& pump, const PropagatedPump& prop) {
  return std::sqrt(kPi / 2.0) * prop.z * prop.z / (pump.k_p() * prop.sigma_z);
}

RateCoefficients rate_coefficients(const SpdcSource& source) {
  const PumpBeam& p = source.pump;
  const PropagatedPump& g = source.propagated;
  const double k = p.k_p();
  const double bracket = p.A_p * kPi * p.ell_c * p.sigma_0 * p.sigma_0 /
                         (g.z * std::sqrt(4.0 * p.sigma_0 * p.sigma_0 + p.ell_c * p.ell_c));
  RateCoefficients rc;
  rc.prefactor = p.A_norm * bracket * bracket;
  rc.diag = std::sqrt(2.0 * kPi / (k * k * g.delta * g.delta));
  if (source.coherence.mode == CoherenceMode::literal) {
    rc.cross = kPi * g.z * g.z / (2.0 * k * k * g.sigma_z * g.delta);
    rc.coherence = 2.0 * rc.cross / rc.diag;
    rc.clamped = rc.coherence > 1.0;
  } else {
    double mu = source.coherence.mu;
    if (source.coherence.reference_ratio > 0.0) {
      mu *= literal_coherence_ratio(p, g) / source.coherence.reference_ratio;
    }
    rc.clamped = mu > 1.0;
    rc.coherence = std::min(mu, 1.0);
    rc.cross = rc.coherence * rc.diag / 2.0;
  }
  return rc;
}

double rate(const SpdcSource& source, double theta_s_deg, double theta_i_deg) {
  const RateCoefficients rc = rate_coefficients(source);
  const DetectionParams& d = source.detection;
  const double ts = deg2rad(theta_s_deg);
  const double ti = deg2rad(theta_i_deg);
  const double cs = std::cos(ts), ss = std::sin(ts);
  const double ci = std::cos(ti), si = std::sin(ti);
  const double bracket = d.c1 * d.c2 * rc.cross * std::sin(2.0 * ts) * std::sin(2.0 * ti) +
                         rc.diag * (d.c1 * d.c1 * cs * cs * si * si + d.c2 * d.c2 * ss * ss * ci * ci);
  const Complex phase = std::polar(1.0, source.pump.k_p() * (d.r_s + d.r_i));
  return std::abs(rc.prefactor * phase * bracket);
}

EffectiveState effective_state(const SpdcSource& source) {
  const RateCoefficients rc = rate_coefficients(source);
  const DetectionParams& d = source.detection;
  const double a = d.c1 * d.c1 * rc.diag;
  const double b = d.c2 * d.c2 * rc.diag;
  const double c = std::min(rc.coherence, 1.0) * std::sqrt(a * b);
  Matrix4c rho = Matrix4c::Zero();
  rho(kHV, kHV) = a;
  rho(kVH, kVH) = b;
  rho(kHV, kVH) = c;
  rho(kVH, kHV) = c;
  return {TwoQubitState::from_numerical(rho / (a + b)), rc.clamped};
}

TwoQubitState apply_mode_filter(const TwoQubitState& state, const DetectionParams& detection) {
  const double gamma = detection.mode_filter.attenuation(detection.collection_scale);
  // Spatial-mode Gram matrix: HH and VV share m0, HV carries m1, VH carries m2,
  // <m1|m2> = gamma, m0 the normalized m1 + m2. Entrywise product keeps rho PSD.
  const double g01 = std::sqrt((1.0 + gamma) / 2.0);
  const int mode_of[4] = {0, 1, 2, 0};
  const double gram[3][3] = {{1.0, g01, g01}, {g01, 1.0, gamma}, {g01, gamma, 1.0}};
  Matrix4c out = state.rho();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) *= gram[mode_of[i]][mode_of[j]];
  return TwoQubitState::from_numerical(out);
}

EffectiveState collected_state(const SpdcSource& source) {
  EffectiveState eff = effective_state(source);
  TwoQubitState filtered = apply_mode_filter(eff.state, source.detection);
  return {depolarize(filtered, source.detection.depolarization), eff.clamped};
}

double ell_c_for_b(const PumpBeam& pump, double z, double b) {
  if (!(b > 0.0 && b <= 1.0)) throw DomainError("B must lie in (0, 1]");
  double lo = std::log(1e-12);
  double hi = std::log(1e3);
  PumpBeam trial = pump;
  auto b_at = [&](double log_ell) {
    trial.ell_c = std::exp(log_ell);
    return b_of(trial, z);
  };
  const double b_lo = b_at(lo);
  const double b_hi = b_at(hi);
  if (!(b_lo <= b && b <= b_hi)) {
    std::ostringstream os;
    os << "cannot bracket B = " << b << ": ell_c in [" << std::exp(lo) << ", " << std::exp(hi)
       << "] m gives B in [" << b_lo << ", " << b_hi << "]";
    throw DomainError(os.str());
  }
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (b_at(mid) < b) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(0.5 * (lo + hi));
}

std::vector<SweepRow> concurrence_vs_b(const SpdcSource& source, const std::vector<double>& b_grid,
                                       const std::vector<CollectionConfig>& collections, int threads) {
  for (double b : b_grid) {
    if (!(b > 0.0 && b <= 1.0)) throw DomainError("B grid values must lie in (0, 1]");
  }
  const std::size_t per_point = collections.size();
  std::vector<SweepRow> rows(b_grid.size() * per_point);

  auto evaluate = [&](std::size_t gi) {
    PumpBeam pump = source.pump;
    pump.ell_c = ell_c_for_b(source.pump, source.propagated.z, b_grid[gi]);
    const SpdcSource varied = source.with_pump(pump);
    const EffectiveState eff = effective_state(varied);
    for (std::size_t ci = 0; ci < per_point; ++ci) {
      DetectionParams det = varied.detection;
      det.collection_scale = collections[ci].d_eff;
      SweepRow& row = rows[gi * per_point + ci];
      row.b = b_grid[gi];
      row.ell_c = pump.ell_c;
      row.collection = collections[ci].name;
      row.collection_scale = collections[ci].d_eff;
      row.concurrence = concurrence(apply_mode_filter(eff.state, det));
      row.clamped = eff.clamped;
    }
  };

  const std::size_t n_threads = threads > 1 ? static_cast<std::size_t>(threads) : 1;
  if (n_threads == 1 || b_grid.size() < 2) {
    for (std::size_t gi = 0; gi < b_grid.size(); ++gi) evaluate(gi);
    return rows;
  }
  std::vector<std::exception_ptr> errors(n_threads);
  std::vector<std::thread> workers;
  for (std::size_t t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t gi = t; gi < b_grid.size(); gi += n_threads) evaluate(gi);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

}  // namespace ledspdc
