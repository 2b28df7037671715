#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ledspdc/polarization.hpp"
#include "ledspdc/spdc.hpp"

namespace ledspdc {

/// Normalized detection probability surface over analyzer settings.
class ProbabilityModel {
 public:
  /// tr(P rho); the peak is the maximum over all product analyzers.
  static ProbabilityModel from_state(const TwoQubitState& state);

  /// Rate law at projection angles 2 * HWP. Settings with a QWP throw InputError.
  static ProbabilityModel from_rate(const SpdcSource& source);

  double operator()(const AnalyzerSetting& setting) const { return fn_(setting); }
  double global_peak() const { return peak_; }
  const std::string& kind() const { return kind_; }

 private:
  std::function<double(const AnalyzerSetting&)> fn_;
  double peak_ = 0.0;
  std::string kind_;
};

enum class PeakReference {
  global,  ///< peak rate belongs to the best product analyzer
  plan,    ///< peak rate belongs to the best setting in the plan
};

std::string to_string(PeakReference ref);
PeakReference parse_peak_reference(const std::string& name);

struct AcquisitionPlan {
  std::vector<AnalyzerSetting> settings;
  double duration_s = 30.0;
  int repeats = 60;
  double singles_rate_s = 10000.0;        ///< counts/min
  double singles_rate_i = 10000.0;        ///< counts/min
  double peak_coincidence_rate = 15.0;    ///< counts/min
  double window = 1e-9;                   ///< s
  std::uint64_t seed = 0;
  PeakReference peak_reference = PeakReference::global;
  /// Estimate accidentals from a simulated delayed-window measurement instead of analytically.
  bool sample_accidentals = false;

  void validate() const;
};

struct CoincidenceRecord {
  AnalyzerSetting setting;
  double duration_s = 0.0;
  std::vector<std::uint64_t> raw_counts;  ///< one per repeat; empty for exact records
  double singles_s = 0.0;                 ///< expected singles per run
  double singles_i = 0.0;
  double accidental_estimate = 0.0;       ///< per run
  double corrected_mean = 0.0;            ///< per run
  double corrected_sem = 0.0;
  bool exact = false;                     ///< expected values, no sampling noise

  double raw_mean() const;
};

/// singles_s * singles_i * window * duration, rates in counts/s.
double accidental_counts(const AcquisitionPlan& plan);

/// Peak-normalized signal counts per run, without accidentals.
double signal_counts(const ProbabilityModel& model, const AnalyzerSetting& setting, const AcquisitionPlan& plan);

/// Signal plus accidentals per run.
double expected_counts(const ProbabilityModel& model, const AnalyzerSetting& setting, const AcquisitionPlan& plan);

/// Poisson realization of every setting and repeat, in plan order.
std::vector<CoincidenceRecord> simulate(const ProbabilityModel& model, const AcquisitionPlan& plan);

/// Expected counts without sampling. corrected_sem is 0.
std::vector<CoincidenceRecord> simulate_exact(const ProbabilityModel& model, const AcquisitionPlan& plan);

}  // namespace ledspdc
