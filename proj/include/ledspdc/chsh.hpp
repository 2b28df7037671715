#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ledspdc/expsim.hpp"

namespace ledspdc {

enum class SigmaMethod {
  poisson,    ///< first-order propagation of per-setting Poisson variances
  bootstrap,  ///< resampling of the repeats of every setting
};

std::string to_string(SigmaMethod method);
SigmaMethod parse_sigma_method(const std::string& name);

struct ChshOptions {
  SigmaMethod sigma = SigmaMethod::poisson;
  int bootstrap_samples = 1000;
  std::uint64_t seed = 0;
};

/// Correlation blocks, signal HWP a and idler HWP b:
///   E1 = E(0, 33.75), E2 = E(0, 11.25), E3 = E(22.5, 11.25), E4 = E(22.5, 33.75)
///   S  = |E1 - E2 + E3 + E4|
/// so that psi+ = (HV + VH)/sqrt(2) gives 2 sqrt(2).
struct ChshResult {
  std::array<double, 4> e_values{};
  double s = 0.0;
  double sigma_s = 0.0;           ///< NaN with infinite_statistics
  bool infinite_statistics = false;
  SigmaMethod sigma_method = SigmaMethod::poisson;
};

/// The 16 HWP pairs, signal {0, 22.5, 45, 67.5} x idler {11.25, 33.75, 56.25, 78.75}.
std::vector<AnalyzerSetting> chsh_settings();

/// E = (N(a,b) + N(a+45,b+45) - N(a,b+45) - N(a+45,b)) / sum of the four.
double correlation(double n_ab, double n_apbp, double n_abp, double n_apb);

/// Needs exactly the 16 settings; missing, duplicate or foreign settings throw InputError
/// listing them. Exact records give sigma_s = NaN and set infinite_statistics.
ChshResult chsh(const std::vector<CoincidenceRecord>& records, const ChshOptions& options = {});

}  // namespace ledspdc
