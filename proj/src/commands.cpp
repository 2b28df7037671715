#include "ledspdc/commands.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>

#include "ledspdc/calibration.hpp"
#include "ledspdc/chsh.hpp"
#include "ledspdc/errors.hpp"
#include "ledspdc/fringe.hpp"
#include "ledspdc/io.hpp"
#include "ledspdc/linalg.hpp"
#include "ledspdc/tomography.hpp"

namespace ledspdc {

namespace {

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("--out", "cannot write '" + path + "'");
  return f;
}

void write_json_file(const std::string& path, const Json& j) {
  auto f = open_output(path);
  f << j.dump(2) << '\n';
}

ProbabilityModel make_model(const RunConfig& cfg) {
  switch (cfg.state) {
    case StateKind::psi_plus: return ProbabilityModel::from_state(bell_psi_plus());
    case StateKind::rate_law: return ProbabilityModel::from_rate(make_source(cfg));
    case StateKind::source: break;
  }
  return ProbabilityModel::from_state(collected_state(make_source(cfg)).state);
}

std::vector<CoincidenceRecord> acquire(const RunConfig& cfg, const CommandOptions& opt,
                                       std::vector<AnalyzerSetting> settings, std::ostream& err) {
  AcquisitionPlan plan = cfg.plan;
  plan.settings = std::move(settings);
  const ProbabilityModel model = make_model(cfg);
  if (opt.exact) return simulate_exact(model, plan);
  err << "seed: " << plan.seed << '\n';
  return simulate(model, plan);
}

Json run_header(const std::string& command, const RunConfig& cfg, const CommandOptions& opt) {
  return {{"command", command},
          {"preset", cfg.preset},
          {"mode", to_string(cfg.mode)},
          {"state", to_string(cfg.state)},
          {"exact", opt.exact},
          {"seed", opt.exact ? Json(nullptr) : Json(cfg.seed)}};
}

Json cmd_rate(const RunConfig& cfg, const CommandOptions& opt) {
  const SpdcSource source = make_source(cfg);
  const RateCoefficients rc = rate_coefficients(source);
  Json j = run_header("rate", cfg, opt);
  j.erase("seed");
  j.erase("exact");
  j["theta_s_deg"] = opt.theta_s;
  j["theta_i_deg"] = opt.theta_i;
  j["rate"] = rate(source, opt.theta_s, opt.theta_i);
  j["clamped"] = rc.clamped;
  j["sigma_z_m"] = source.propagated.sigma_z;
  j["delta_m"] = source.propagated.delta;
  j["b_param"] = source.propagated.b_param;
  if (opt.out) write_json_file(*opt.out, j);
  return j;
}

Json cmd_fringe(const RunConfig& cfg, const CommandOptions& opt, std::ostream& err) {
  const FringeBasis basis = parse_fringe_basis(opt.basis);
  const auto records = acquire(cfg, opt, fringe_settings(basis, cfg.fringe_angles), err);
  const auto points = fringe_points(records);
  const FringeFit fit = fit_fringe(points, basis);
  if (opt.out) {
    auto f = open_output(*opt.out);
    write_fringe_csv(f, points);
  }
  if (opt.fit_out) write_json_file(*opt.fit_out, to_json(fit));
  Json j = run_header("fringe", cfg, opt);
  j["fit"] = to_json(fit);
  j["points"] = points.size();
  return j;
}

Json cmd_chsh(const RunConfig& cfg, const CommandOptions& opt, std::ostream& err) {
  const auto records = acquire(cfg, opt, chsh_settings(), err);
  ChshOptions co;
  co.sigma = cfg.sigma_method;
  co.bootstrap_samples = cfg.bootstrap_samples;
  co.seed = cfg.seed;
  Json j = run_header("chsh", cfg, opt);
  j["result"] = to_json(chsh(records, co));
  if (opt.out) write_json_file(*opt.out, j);
  return j;
}

Json cmd_tomo(const RunConfig& cfg, const CommandOptions& opt, std::ostream& err) {
  if (opt.method != "mle" && opt.method != "linear") {
    throw ConfigError("--method", "expected mle or linear, got '" + opt.method + "'");
  }
  std::vector<ProjectionCount> counts;
  Json j = run_header("tomo", cfg, opt);
  if (opt.counts_path) {
    std::ifstream in(*opt.counts_path);
    if (!in) throw ConfigError("--counts", "cannot open '" + *opt.counts_path + "'");
    counts = projection_counts_from_json(Json::parse(in));
    j["exact"] = nullptr;
    j["seed"] = nullptr;
  } else {
    std::vector<AnalyzerSetting> settings;
    for (const auto& label : canonical_tomography_labels()) settings.push_back(tomography_setting(label));
    counts = projection_counts(acquire(cfg, opt, settings, err));
  }
  TomographyResult result;
  if (opt.method == "mle") {
    result = tomo_mle(counts);
  } else {
    result.rho_linear = tomo_linear(counts);
    result.rho_mle = TwoQubitState::from_numerical(project_to_physical<double, 4>(result.rho_linear));
    result.log_likelihood = tomography_log_likelihood(counts, result.rho_mle.rho());
    result.concurrence = concurrence(result.rho_mle);
    result.purity = purity(result.rho_mle);
    result.fidelity_psi_plus = fidelity(result.rho_mle, bell_psi_plus());
    result.converged = true;
  }
  j["counts"] = to_json(counts);
  j["result"] = to_json(result, opt.method);
  if (opt.out) write_json_file(*opt.out, j);
  return j;
}

Json cmd_sweep(const RunConfig& cfg, const CommandOptions& opt) {
  const SpdcSource source = make_source(cfg);
  const auto rows = concurrence_vs_b(source, cfg.sweep.values(), cfg.collections, opt.threads);
  if (opt.out) {
    auto f = open_output(*opt.out);
    write_sweep_csv(f, rows);
  }

  // Curves are listed per grid point in collection order; rank collections by effective diameter.
  const std::size_t nc = cfg.collections.size();
  std::vector<std::size_t> by_size(nc);
  for (std::size_t k = 0; k < nc; ++k) by_size[k] = k;
  std::sort(by_size.begin(), by_size.end(),
            [&](std::size_t a, std::size_t b) { return cfg.collections[a].d_eff < cfg.collections[b].d_eff; });
  bool monotone = true;
  bool ordered = true;
  const std::size_t np = nc == 0 ? 0 : rows.size() / nc;
  for (std::size_t g = 0; g < np; ++g) {
    for (std::size_t k = 0; k < nc; ++k) {
      if (g > 0 && rows[g * nc + k].concurrence < rows[(g - 1) * nc + k].concurrence) monotone = false;
      if (k > 0 && !(rows[g * nc + by_size[k]].concurrence < rows[g * nc + by_size[k - 1]].concurrence)) ordered = false;
    }
  }

  Json points = Json::array();
  for (const auto& c : cfg.collections) {
    const EffectiveState st = collected_state(with_collection(source, c));
    points.push_back({{"collection", c.name},
                      {"label_m", c.label},
                      {"collection_scale_m", c.d_eff},
                      {"b", source.propagated.b_param},
                      {"concurrence", concurrence(st.state)},
                      {"clamped", st.clamped}});
  }
  Json j = run_header("sweep", cfg, opt);
  j.erase("seed");
  j.erase("exact");
  j["rows"] = rows.size();
  j["monotone"] = monotone;
  j["ordered"] = ordered;
  j["points"] = points;
  return j;
}

Json cmd_simulate(const RunConfig& cfg, const CommandOptions& opt, std::ostream& out, std::ostream& err) {
  std::vector<AnalyzerSetting> settings;
  if (opt.plan == "chsh") {
    settings = chsh_settings();
  } else if (opt.plan == "tomo") {
    for (const auto& label : canonical_tomography_labels()) settings.push_back(tomography_setting(label));
  } else if (opt.plan == "fringe-hv") {
    settings = fringe_settings(FringeBasis::hv, cfg.fringe_angles);
  } else if (opt.plan == "fringe-ad") {
    settings = fringe_settings(FringeBasis::ad, cfg.fringe_angles);
  } else {
    throw ConfigError("--plan", "expected chsh, tomo, fringe-hv or fringe-ad, got '" + opt.plan + "'");
  }
  AcquisitionPlan plan = cfg.plan;
  plan.settings = settings;
  const auto records = acquire(cfg, opt, settings, err);
  if (opt.out) {
    auto f = open_output(*opt.out);
    write_records_jsonl(f, plan, records);
  } else {
    write_records_jsonl(out, plan, records);
  }
  return nullptr;
}

Json cmd_calibrate(const RunConfig& cfg, const CommandOptions& opt) {
  const SpdcSource base = make_source(cfg);
  const VisibilityCalibration vis = fit_visibilities(cfg.targets.v_hv, cfg.targets.v_ad, cfg.detection.c1, cfg.detection.c2);
  SpdcSource noisy = base;
  noisy.detection.depolarization = vis.depolarization;
  std::size_t ref = 0;
  for (std::size_t k = 0; k < cfg.collections.size(); ++k)
    if (cfg.collections[k].name == cfg.collection) ref = k;
  const ModeFilterCalibration mf = fit_mode_filter(noisy, vis.mu_eff, cfg.collections, cfg.targets.concurrence, ref);

  SpdcSource fitted = noisy;
  fitted.coherence.mode = CoherenceMode::calibrated;
  fitted.coherence.mu = mf.mu;
  fitted.detection.mode_filter = {ModeFilterModel::quadrature, mf.scale};
  SpdcSource theory = fitted;
  theory.detection.depolarization = 0.0;
  const double mu_theory = mu_for_chsh(theory, cfg.targets.bell_theory);

  Json conc = Json::object();
  for (std::size_t k = 0; k < cfg.collections.size(); ++k) conc[cfg.collections[k].name] = mf.concurrence[k];
  Json j = run_header("calibrate", cfg, opt);
  j.erase("seed");
  j.erase("exact");
  j["depolarization"] = vis.depolarization;
  j["mu_eff"] = vis.mu_eff;
  j["mu"] = mf.mu;
  j["mode_filter_scale_m"] = mf.scale;
  j["concurrence"] = conc;
  j["concurrence_residual"] = mf.residual;
  j["exact_s"] = exact_chsh(collected_state(fitted).state);
  j["theory_mu"] = mu_theory;
  j["visibility"] = {{"H-V", vis.v_hv}, {"A-D", vis.v_ad}};
  if (opt.out) write_json_file(*opt.out, j);
  return j;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"rate", "fringe", "chsh", "tomo", "sweep", "simulate", "calibrate"};
  return names;
}

int run_command(const std::string& command, const CommandOptions& options, std::ostream& out, std::ostream& err) {
  try {
    if (std::find(command_names().begin(), command_names().end(), command) == command_names().end()) {
      throw ConfigError("command", "unknown command '" + command + "'");
    }
    if (options.threads < 1) throw ConfigError("--threads", "must be at least 1");
    const RunConfig cfg = load_run_config(options.sources);
    Json j;
    if (command == "rate") j = cmd_rate(cfg, options);
    if (command == "fringe") j = cmd_fringe(cfg, options, err);
    if (command == "chsh") j = cmd_chsh(cfg, options, err);
    if (command == "tomo") j = cmd_tomo(cfg, options, err);
    if (command == "sweep") j = cmd_sweep(cfg, options);
    if (command == "simulate") j = cmd_simulate(cfg, options, out, err);
    if (command == "calibrate") j = cmd_calibrate(cfg, options);
    if (!j.is_null()) out << j.dump(2) << '\n';
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace ledspdc
