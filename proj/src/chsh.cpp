#include "ledspdc/chsh.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ledspdc/errors.hpp"
#include "ledspdc/random.hpp"

namespace ledspdc {

namespace {

constexpr double kSignal[4] = {0.0, 22.5, 45.0, 67.5};
constexpr double kIdler[4] = {11.25, 33.75, 56.25, 78.75};

struct Block {
  int a;  // index into kSignal of a; a + 2 is a + 45
  int b;  // index into kIdler of b; b + 2 is b + 45
  double sign;
};

constexpr Block kBlocks[4] = {{0, 1, 1.0}, {0, 0, -1.0}, {1, 0, 1.0}, {1, 1, 1.0}};

int setting_index(int ia, int ib) { return 4 * ia + ib; }

bool same_angle(double x, double y) {
  const double d = std::fmod(std::abs(x - y), 180.0);
  return d < 1e-9 || 180.0 - d < 1e-9;
}

// Index of the record for each of the 16 settings.
std::array<std::size_t, 16> match(const std::vector<CoincidenceRecord>& records) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::array<std::size_t, 16> slot;
  slot.fill(kNone);
  std::vector<std::string> foreign;
  std::vector<std::string> duplicate;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const AnalyzerSetting& s = records[r].setting;
    int found = -1;
    if (!s.qwp_s && !s.qwp_i) {
      for (int ia = 0; ia < 4 && found < 0; ++ia)
        for (int ib = 0; ib < 4; ++ib)
          if (same_angle(s.hwp_s, kSignal[ia]) && same_angle(s.hwp_i, kIdler[ib])) {
            found = setting_index(ia, ib);
            break;
          }
    }
    if (found < 0) {
      foreign.push_back(to_string(s));
    } else if (slot[static_cast<std::size_t>(found)] != kNone) {
      duplicate.push_back(to_string(s));
    } else {
      slot[static_cast<std::size_t>(found)] = r;
    }
  }
  std::vector<std::string> missing;
  for (int ia = 0; ia < 4; ++ia)
    for (int ib = 0; ib < 4; ++ib)
      if (slot[static_cast<std::size_t>(setting_index(ia, ib))] == kNone) {
        missing.push_back(to_string(AnalyzerSetting::hwp(kSignal[ia], kIdler[ib])));
      }
  if (!missing.empty() || !duplicate.empty() || !foreign.empty()) {
    std::ostringstream os;
    os << "chsh needs exactly the 16 HWP settings;";
    auto list = [&os](const char* what, const std::vector<std::string>& v) {
      if (v.empty()) return;
      os << " " << what << ":";
      for (const auto& x : v) os << " " << x;
      os << ";";
    };
    list("missing", missing);
    list("duplicate", duplicate);
    list("unexpected", foreign);
    throw InputError(os.str());
  }
  return slot;
}

struct Estimate {
  std::array<double, 4> e{};
  double s = 0.0;
};

template <typename Counts>
Estimate evaluate(const Counts& n) {
  Estimate out;
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const Block& blk = kBlocks[k];
    out.e[k] = correlation(n(blk.a, blk.b), n(blk.a + 2, blk.b + 2), n(blk.a, blk.b + 2), n(blk.a + 2, blk.b));
    total += blk.sign * out.e[k];
  }
  out.s = std::abs(total);
  return out;
}

}  // namespace

std::string to_string(SigmaMethod method) { return method == SigmaMethod::poisson ? "poisson" : "bootstrap"; }

SigmaMethod parse_sigma_method(const std::string& name) {
  if (name == "poisson") return SigmaMethod::poisson;
  if (name == "bootstrap") return SigmaMethod::bootstrap;
  throw DomainError("unknown sigma method '" + name + "' (expected poisson or bootstrap)");
}

std::vector<AnalyzerSetting> chsh_settings() {
  std::vector<AnalyzerSetting> out;
  for (double a : kSignal)
    for (double b : kIdler) out.push_back(AnalyzerSetting::hwp(a, b));
  return out;
}

double correlation(double n_ab, double n_apbp, double n_abp, double n_apb) {
  const double total = n_ab + n_apbp + n_abp + n_apb;
  if (!(total > 0.0)) throw DomainError("correlation block has no counts");
  return (n_ab + n_apbp - n_abp - n_apb) / total;
}

ChshResult chsh(const std::vector<CoincidenceRecord>& records, const ChshOptions& options) {
  const auto slot = match(records);
  auto rec = [&](int ia, int ib) -> const CoincidenceRecord& {
    return records[slot[static_cast<std::size_t>(setting_index(ia, ib))]];
  };
  const Estimate est = evaluate([&](int ia, int ib) { return rec(ia, ib).corrected_mean; });

  ChshResult out;
  out.e_values = est.e;
  out.s = est.s;
  out.sigma_method = options.sigma;

  bool exact = false;
  for (const auto& r : records) exact = exact || r.exact || r.raw_counts.empty();
  if (exact) {
    out.infinite_statistics = true;
    out.sigma_s = std::numeric_limits<double>::quiet_NaN();
    return out;
  }

  if (options.sigma == SigmaMethod::poisson) {
    double var_s = 0.0;
    for (int k = 0; k < 4; ++k) {
      const Block& blk = kBlocks[k];
      // A = N(a,b) + N(a',b'), B = N(a,b') + N(a',b); dE/dA = 2B/(A+B)^2, dE/dB = -2A/(A+B)^2.
      auto var = [&](int ia, int ib) {
        const CoincidenceRecord& r = rec(ia, ib);
        return std::max(r.raw_mean(), 0.0) / static_cast<double>(r.raw_counts.size());
      };
      const double a = rec(blk.a, blk.b).corrected_mean + rec(blk.a + 2, blk.b + 2).corrected_mean;
      const double b = rec(blk.a, blk.b + 2).corrected_mean + rec(blk.a + 2, blk.b).corrected_mean;
      const double var_a = var(blk.a, blk.b) + var(blk.a + 2, blk.b + 2);
      const double var_b = var(blk.a, blk.b + 2) + var(blk.a + 2, blk.b);
      const double t = a + b;
      var_s += (4.0 * b * b * var_a + 4.0 * a * a * var_b) / (t * t * t * t);
    }
    out.sigma_s = std::sqrt(var_s);
    return out;
  }

  if (options.bootstrap_samples < 2) throw DomainError("bootstrap needs at least 2 samples");
  double sum = 0.0;
  double sum_sq = 0.0;
  std::array<double, 16> resampled{};
  for (int b = 0; b < options.bootstrap_samples; ++b) {
    for (std::size_t k = 0; k < 16; ++k) {
      const CoincidenceRecord& r = records[slot[k]];
      Pcg32 rng = substream(options.seed, k, static_cast<std::uint64_t>(b));
      const auto n = static_cast<std::uint32_t>(r.raw_counts.size());
      double total = 0.0;
      for (std::uint32_t j = 0; j < n; ++j) {
        const auto pick = static_cast<std::size_t>(rng.uniform() * n);
        total += static_cast<double>(r.raw_counts[std::min<std::size_t>(pick, n - 1)]);
      }
      resampled[k] = total / n - r.accidental_estimate;
    }
    const double s = evaluate([&](int ia, int ib) { return resampled[static_cast<std::size_t>(setting_index(ia, ib))]; }).s;
    sum += s;
    sum_sq += s * s;
  }
  const double m = options.bootstrap_samples;
  out.sigma_s = std::sqrt(std::max(0.0, (sum_sq - sum * sum / m) / (m - 1.0)));
  return out;
}

}  // namespace ledspdc
