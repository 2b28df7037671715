#include "ledspdc/expsim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ledspdc/errors.hpp"
#include "ledspdc/random.hpp"

namespace ledspdc {

namespace {

constexpr std::uint64_t kDelayedWindowStream = 1ULL << 32;

double plan_peak(const ProbabilityModel& model, const AcquisitionPlan& plan) {
  if (plan.peak_reference == PeakReference::global) return model.global_peak();
  double peak = 0.0;
  for (const auto& s : plan.settings) peak = std::max(peak, model(s));
  return peak;
}

}  // namespace

ProbabilityModel ProbabilityModel::from_state(const TwoQubitState& state) {
  ProbabilityModel m;
  m.fn_ = [state](const AnalyzerSetting& s) { return probability(state, s); };
  m.peak_ = max_product_expectation(state.rho());
  m.kind_ = "state";
  return m;
}

ProbabilityModel ProbabilityModel::from_rate(const SpdcSource& source) {
  ProbabilityModel m;
  m.fn_ = [source](const AnalyzerSetting& s) {
    if (s.qwp_s || s.qwp_i) throw InputError("rate model supports HWP-only settings, got " + to_string(s));
    return rate(source, 2.0 * s.hwp_s, 2.0 * s.hwp_i);
  };
  // Bracket of the rate law as a quadratic form over product kets; |.| allows a clamped, indefinite form.
  const RateCoefficients rc = rate_coefficients(source);
  const DetectionParams& d = source.detection;
  Matrix4c form = Matrix4c::Zero();
  form(kHV, kHV) = d.c1 * d.c1 * rc.diag;
  form(kVH, kVH) = d.c2 * d.c2 * rc.diag;
  form(kHV, kVH) = form(kVH, kHV) = 2.0 * d.c1 * d.c2 * rc.cross;
  m.peak_ = rc.prefactor * std::max(max_product_expectation(form), max_product_expectation(-form));
  m.kind_ = "rate";
  return m;
}

std::string to_string(PeakReference ref) { return ref == PeakReference::global ? "global" : "plan"; }

PeakReference parse_peak_reference(const std::string& name) {
  if (name == "global") return PeakReference::global;
  if (name == "plan") return PeakReference::plan;
  throw DomainError("unknown peak reference '" + name + "' (expected global or plan)");
}

void AcquisitionPlan::validate() const {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw DomainError("plan.duration must be positive");
  if (repeats < 1) throw DomainError("plan.repeats must be at least 1");
  if (!(singles_rate_s >= 0.0) || !(singles_rate_i >= 0.0)) throw DomainError("plan singles rates must be >= 0");
  if (!(peak_coincidence_rate >= 0.0)) throw DomainError("plan.peak_coincidence_rate must be >= 0");
  if (!(window > 0.0) || !std::isfinite(window)) throw DomainError("plan.window must be positive");
}

double CoincidenceRecord::raw_mean() const {
  if (raw_counts.empty()) return corrected_mean + accidental_estimate;
  const double total = std::accumulate(raw_counts.begin(), raw_counts.end(), 0.0,
                                       [](double acc, std::uint64_t n) { return acc + static_cast<double>(n); });
  return total / static_cast<double>(raw_counts.size());
}

double accidental_counts(const AcquisitionPlan& plan) {
  return (plan.singles_rate_s / 60.0) * (plan.singles_rate_i / 60.0) * plan.window * plan.duration_s;
}

double signal_counts(const ProbabilityModel& model, const AnalyzerSetting& setting, const AcquisitionPlan& plan) {
  plan.validate();
  const double peak = plan_peak(model, plan);
  if (!(peak > 0.0)) throw DomainError("probability surface is zero for every setting");
  return plan.peak_coincidence_rate / 60.0 * plan.duration_s * model(setting) / peak;
}

double expected_counts(const ProbabilityModel& model, const AnalyzerSetting& setting, const AcquisitionPlan& plan) {
  return signal_counts(model, setting, plan) + accidental_counts(plan);
}

std::vector<CoincidenceRecord> simulate(const ProbabilityModel& model, const AcquisitionPlan& plan) {
  plan.validate();
  const double acc = accidental_counts(plan);
  const double peak = plan_peak(model, plan);
  if (!(peak > 0.0)) throw DomainError("probability surface is zero for every setting");
  const double scale = plan.peak_coincidence_rate / 60.0 * plan.duration_s / peak;
  const auto n = static_cast<std::size_t>(plan.repeats);

  std::vector<CoincidenceRecord> records;
  records.reserve(plan.settings.size());
  for (std::size_t si = 0; si < plan.settings.size(); ++si) {
    CoincidenceRecord rec;
    rec.setting = plan.settings[si];
    rec.duration_s = plan.duration_s;
    rec.singles_s = plan.singles_rate_s / 60.0 * plan.duration_s;
    rec.singles_i = plan.singles_rate_i / 60.0 * plan.duration_s;
    const double lambda = scale * model(rec.setting) + acc;
    rec.raw_counts.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
      Pcg32 rng = substream(plan.seed, si, r);
      rec.raw_counts[r] = sample_poisson(rng, lambda);
    }
    rec.accidental_estimate = acc;
    if (plan.sample_accidentals) {
      double delayed = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        Pcg32 rng = substream(plan.seed, si, kDelayedWindowStream + r);
        delayed += static_cast<double>(sample_poisson(rng, acc));
      }
      rec.accidental_estimate = delayed / static_cast<double>(n);
    }
    const double mean = rec.raw_mean();
    rec.corrected_mean = mean - rec.accidental_estimate;
    if (n == 1) {
      rec.corrected_sem = std::sqrt(static_cast<double>(rec.raw_counts[0]));
    } else {
      double ss = 0.0;
      for (auto c : rec.raw_counts) ss += (static_cast<double>(c) - mean) * (static_cast<double>(c) - mean);
      rec.corrected_sem = std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<CoincidenceRecord> simulate_exact(const ProbabilityModel& model, const AcquisitionPlan& plan) {
  plan.validate();
  const double acc = accidental_counts(plan);
  std::vector<CoincidenceRecord> records;
  records.reserve(plan.settings.size());
  for (const auto& s : plan.settings) {
    CoincidenceRecord rec;
    rec.setting = s;
    rec.duration_s = plan.duration_s;
    rec.singles_s = plan.singles_rate_s / 60.0 * plan.duration_s;
    rec.singles_i = plan.singles_rate_i / 60.0 * plan.duration_s;
    rec.accidental_estimate = acc;
    rec.corrected_mean = signal_counts(model, s, plan);
    rec.exact = true;
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace ledspdc
