// Acceptance suite: one PASS/FAIL line per criterion.
//   acceptance                 run all criteria
//   acceptance --criterion N   run criterion N only; exit status 1 on failure

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "ledspdc/calibration.hpp"
#include "ledspdc/chsh.hpp"
#include "ledspdc/config.hpp"
#include "ledspdc/expsim.hpp"
#include "ledspdc/io.hpp"
#include "ledspdc/random.hpp"
#include "ledspdc/spdc.hpp"
#include "ledspdc/tomography.hpp"
#include "stats.hpp"
#include "support.hpp"

using namespace ledspdc;

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

RunConfig preset(const std::string& name) {
  ConfigSources src;
  src.preset = name;
  src.seed = 2022;
  return load_run_config(src);
}

std::vector<AnalyzerSetting> tomography_settings() {
  std::vector<AnalyzerSetting> out;
  for (const auto& l : canonical_tomography_labels()) out.push_back(tomography_setting(l));
  return out;
}

Outcome criterion1() {
  AcquisitionPlan plan;
  plan.settings = chsh_settings();
  const auto r = chsh(simulate_exact(ProbabilityModel::from_state(bell_psi_plus()), plan));
  const double dev = std::abs(r.s - 2.0 * kSqrt2);
  return {dev <= 1e-9 && r.infinite_statistics && std::isnan(r.sigma_s),
          fmt("S = %.12f, |S - 2 sqrt 2| = %.2e, infinite statistics %s", r.s, dev,
              r.infinite_statistics ? "set" : "unset")};
}

Outcome criterion2() {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto log_uniform = [&](double lo, double hi) { return lo * std::pow(hi / lo, u(gen)); };
  double worst = 0.0;
  int sets = 0;
  int skipped = 0;
  while (sets < 20) {
    PumpBeam pump;
    pump.wavelength = log_uniform(300e-9, 1100e-9);
    pump.sigma_0 = log_uniform(0.2e-3, 10e-3);
    pump.ell_c = log_uniform(1e-6, 1e-3);
    pump.A_p = log_uniform(0.1, 10.0);
    DetectionParams det;
    det.c1 = 0.2 + 0.8 * u(gen);
    det.c2 = 0.2 + 0.8 * u(gen);
    det.r_s = 0.01 * u(gen);
    det.r_i = 0.01 * u(gen);
    const bool literal = sets % 2 == 0;
    const auto src = SpdcSource::make(pump, log_uniform(0.02, 1.0), det,
                                      literal ? CoherenceMode::literal : CoherenceMode::calibrated, u(gen));
    const auto eff = effective_state(src);
    if (eff.clamped) {
      ++skipped;
      continue;
    }
    double ratio0 = 0.0;
    for (int k = 0; k < 100; ++k) {
      const double ts = 180.0 * u(gen);
      const double ti = 180.0 * u(gen);
      const Ket4 v = linear_product_ket(ts, ti);
      const double p = (v.adjoint() * eff.state.rho() * v)(0).real();
      const double r = rate(src, ts, ti);
      if (p < 1e-12) continue;
      const double ratio = r / p;
      if (ratio0 == 0.0) ratio0 = ratio;
      worst = std::max(worst, std::abs(ratio / ratio0 - 1.0));
    }
    ++sets;
  }
  return {worst <= 1e-10, fmt("20 parameter sets x 100 angle pairs, max relative deviation %.2e (%d clamped sets skipped)",
                              worst, skipped)};
}

Outcome criterion3() {
  double werner_dev = 0.0;
  for (int k = 0; k <= 1000; ++k) {
    const double p = k / 1000.0;
    werner_dev = std::max(werner_dev, std::abs(concurrence(werner(p)) - std::max(0.0, (3.0 * p - 1.0) / 2.0)));
  }
  std::mt19937_64 gen(3);
  double lu_dev = 0.0;
  for (int k = 0; k < 100; ++k) {
    const auto rho = k % 2 ? testsupport::random_state(gen) : testsupport::random_pure_state(gen);
    const Matrix4c u = testsupport::kron(testsupport::random_unitary(gen), testsupport::random_unitary(gen));
    const auto rotated = TwoQubitState::from_numerical(u * rho.rho() * u.adjoint());
    lu_dev = std::max(lu_dev, std::abs(concurrence(rotated) - concurrence(rho)));
  }
  return {werner_dev <= 1e-9 && lu_dev <= 1e-9,
          fmt("Werner max deviation %.2e over 1001 points, local-unitary max deviation %.2e over 100 trials",
              werner_dev, lu_dev)};
}

Outcome criterion4() {
  std::mt19937_64 gen(4);
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const auto rho = k % 2 ? testsupport::random_state(gen) : testsupport::random_pure_state(gen);
    std::vector<ProjectionCount> counts;
    for (const auto& l : canonical_tomography_labels()) {
      counts.push_back({l, tomography_setting(l), 1e4 * probability(rho, tomography_setting(l))});
    }
    worst = std::max(worst, (tomo_linear(counts) - rho.rho()).cwiseAbs().maxCoeff());
  }
  std::vector<ProjectionCount> ideal;
  for (const auto& l : canonical_tomography_labels()) {
    ideal.push_back({l, tomography_setting(l), 1e4 * probability(bell_psi_plus(), tomography_setting(l))});
  }
  const auto mle = tomo_mle(ideal);
  return {worst <= 1e-10 && mle.fidelity_psi_plus > 0.9999,
          fmt("linear round trip max error %.2e over 1000 states, MLE fidelity with psi+ %.8f", worst,
              mle.fidelity_psi_plus)};
}

Outcome criterion5() {
  const RunConfig cfg = preset("default");
  const auto state = collected_state(make_source(cfg)).state;
  const double v_hv = exact_visibility(state, FringeBasis::hv);
  const double v_ad = exact_visibility(state, FringeBasis::ad);
  const double s_exact = exact_chsh(state);
  const auto model = ProbabilityModel::from_state(state);

  constexpr int kReplicates = 200;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sum_sigma = 0.0;
  for (int k = 0; k < kReplicates; ++k) {
    AcquisitionPlan plan = cfg.plan;
    plan.settings = chsh_settings();
    plan.seed = substream(cfg.seed, 5, static_cast<std::uint64_t>(k))();
    const auto r = chsh(simulate(model, plan));
    sum += r.s;
    sum_sq += r.s * r.s;
    sum_sigma += r.sigma_s;
  }
  const double mean = sum / kReplicates;
  const double spread = std::sqrt((sum_sq - kReplicates * mean * mean) / (kReplicates - 1));
  const bool vis_ok = std::abs(v_hv - 0.86) <= 1e-6 && std::abs(v_ad - 0.82) <= 1e-6;
  const bool pass = vis_ok && s_exact >= 2.30 && s_exact <= 2.45 && std::abs(mean - s_exact) <= 0.05 &&
                    spread >= 0.05 && spread <= 0.2;
  return {pass, fmt("V(H-V) = %.6f, V(A-D) = %.6f, exact S = %.6f, MC mean S = %.6f (|diff| %.4f), replicate "
                    "spread %.4f, mean propagated sigma %.4f",
                    v_hv, v_ad, s_exact, mean, std::abs(mean - s_exact), spread, sum_sigma / kReplicates)};
}

Outcome criterion6() {
  const RunConfig cfg = preset("default");
  const auto base = make_source(cfg);
  const auto settings = tomography_settings();
  std::string detail = fmt("D0 = %.4e m;", cfg.detection.mode_filter.scale);
  bool pass = true;
  for (std::size_t k = 0; k < cfg.collections.size(); ++k) {
    const auto state = collected_state(with_collection(base, cfg.collections[k])).state;
    const auto model = ProbabilityModel::from_state(state);
    AcquisitionPlan plan = cfg.plan;
    plan.settings = settings;
    plan.seed = substream(cfg.seed, 6, k)();
    const double exact = tomo_mle(projection_counts(simulate_exact(model, plan))).concurrence;
    const double sampled = tomo_mle(projection_counts(simulate(model, plan))).concurrence;
    const double target = cfg.targets.concurrence[k];
    const bool ok = std::abs(exact - target) <= 0.05 && std::abs(sampled - target) <= 0.08;
    pass = pass && ok;
    detail += fmt(" %s target %.2f: exact %.4f, sampled %.4f %s;", cfg.collections[k].name.c_str(), target, exact,
                  sampled, ok ? "ok" : "MISS");
  }
  return {pass, detail};
}

Outcome criterion7() {
  const RunConfig cfg = preset("theory");
  const auto rows = concurrence_vs_b(make_source(cfg), cfg.sweep.values(), cfg.collections, 4);
  const std::size_t n = cfg.collections.size();
  bool monotone = true;
  bool ordered = true;
  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < rows.size() / n; ++g) {
    for (std::size_t c = 0; c < n; ++c) {
      const auto& row = rows[g * n + c];
      if (g > 0 && row.concurrence < rows[(g - 1) * n + c].concurrence) monotone = false;
      if (c > 0) {
        const double gap = rows[g * n + c - 1].concurrence - row.concurrence;
        min_gap = std::min(min_gap, gap);
        if (!(gap > 0.0)) ordered = false;
      }
    }
  }
  return {monotone && ordered, fmt("%zu grid points x %zu collections, monotone %s, ordered %s, min gap %.3e",
                                   rows.size() / n, n, monotone ? "yes" : "no", ordered ? "yes" : "no", min_gap)};
}

Outcome criterion8() {
  std::string detail;
  bool pass = true;
  for (double lambda : {0.5, 7.5, 100.0}) {
    Pcg32 rng = substream(2022, 8, static_cast<std::uint64_t>(lambda * 10));
    std::vector<std::uint64_t> draws(100000);
    for (auto& d : draws) d = sample_poisson(rng, lambda);
    const auto chi = testsupport::poisson_chi_square(draws, lambda);
    pass = pass && chi.p_value > 1e-3;
    detail += fmt("lambda %.1f: chi2 %.1f on %d dof, p = %.3f; ", lambda, chi.statistic, chi.dof, chi.p_value);
  }
  const RunConfig cfg = preset("default");
  const auto model = ProbabilityModel::from_state(collected_state(make_source(cfg)).state);
  AcquisitionPlan plan = cfg.plan;
  plan.settings = chsh_settings();
  const auto dir = std::filesystem::temp_directory_path();
  std::string bytes[2];
  for (int k = 0; k < 2; ++k) {
    const auto path = dir / ("ledspdc_acceptance_" + std::to_string(k) + ".jsonl");
    {
      std::ofstream f(path, std::ios::binary);
      write_records_jsonl(f, plan, simulate(model, plan));
    }
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    bytes[k] = os.str();
    std::filesystem::remove(path);
  }
  const bool identical = !bytes[0].empty() && bytes[0] == bytes[1];
  pass = pass && identical;
  detail += fmt("record files %s (%zu bytes)", identical ? "byte-identical" : "DIFFER", bytes[0].size());
  return {pass, detail};
}

struct Criterion {
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const Criterion criteria[] = {
      {"Tsirelson saturation", 1.0, criterion1},
      {"rate/state oracle equivalence", 5.0, criterion2},
      {"concurrence correctness", 0.0, criterion3},
      {"tomography round trip", 0.0, criterion4},
      {"headline Bell parameter", 120.0, criterion5},
      {"concurrence triple", 0.0, criterion6},
      {"sweep shape", 0.0, criterion7},
      {"statistics validity", 0.0, criterion8},
  };
  int failures = 0;
  for (int n = 1; n <= 8; ++n) {
    if (only != 0 && n != only) continue;
    const Criterion& c = criteria[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget_s > 0.0 && elapsed > c.budget_s) {
      o.pass = false;
      o.detail += fmt(" [runtime %.2f s exceeds %.0f s]", elapsed, c.budget_s);
    }
    std::printf("criterion %d (%s): %s  %s  [%.2f s]\n", n, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                elapsed);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
