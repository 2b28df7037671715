#include "ledspdc/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "ledspdc/errors.hpp"
#include "ledspdc/units.hpp"

namespace ledspdc {

namespace {

using nlohmann::json;

std::string join(const std::string& base, const std::string& key) { return base.empty() ? key : base + "." + key; }

void reject_unknown(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!ok.count(key)) throw ConfigError(join(path, key), "unknown key");
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
  return x;
}

int integer(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  return v.get<int>();
}

std::string text(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

double length(const json& v, const std::string& path) {
  if (v.is_number()) return number(v, path);
  if (!v.is_string()) throw ConfigError(path, "expected a length such as \"11um\"");
  try {
    return parse_length(v.get<std::string>());
  } catch (const ConfigError& e) {
    throw ConfigError(path, e.what());
  }
}

std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

template <typename F>
auto parse_enum(F&& parse, const json& v, const std::string& path) {
  const std::string name = text(v, path);
  try {
    return parse(name);
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

StateKind parse_state_kind(const std::string& name) {
  if (name == "source") return StateKind::source;
  if (name == "psi_plus") return StateKind::psi_plus;
  if (name == "rate_law") return StateKind::rate_law;
  throw ConfigError("", "unknown state '" + name + "' (expected source, psi_plus or rate_law)");
}

ModeFilterModel parse_filter_model(const std::string& name) {
  if (name == "quadrature") return ModeFilterModel::quadrature;
  if (name == "none") return ModeFilterModel::none;
  throw ConfigError("", "unknown mode filter '" + name + "' (expected quadrature or none)");
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, "cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

std::string to_string(StateKind kind) {
  switch (kind) {
    case StateKind::source: return "source";
    case StateKind::psi_plus: return "psi_plus";
    case StateKind::rate_law: return "rate_law";
  }
  return "source";
}

std::vector<double> SweepGrid::values() const {
  std::vector<double> out;
  if (points == 1) return {b_min};
  const double ratio = std::log(b_max / b_min) / static_cast<double>(points - 1);
  for (int k = 0; k < points; ++k) out.push_back(k + 1 == points ? b_max : b_min * std::exp(ratio * k));
  return out;
}

void RunConfig::validate() const {
  auto wrap = [](const std::string& path, auto&& fn) {
    try {
      fn();
    } catch (const DomainError& e) {
      throw ConfigError(path, e.what());
    }
  };
  wrap("pump", [&] { pump.validate(); });
  if (!(z > 0.0)) throw ConfigError("z", "must be positive");
  wrap("detection", [&] { detection.validate(); });
  if (collections.empty()) throw ConfigError("collections", "at least one collection is required");
  for (std::size_t k = 0; k < collections.size(); ++k) {
    if (!(collections[k].d_eff > 0.0)) throw ConfigError("collections[" + std::to_string(k) + "].d_eff", "must be positive");
  }
  selected_collection(*this);
  if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("coherence.mu", "must lie in [0, 1]");
  wrap("plan", [&] { plan.validate(); });
  if (bootstrap_samples < 2) throw ConfigError("analysis.bootstrap_samples", "must be at least 2");
  if (fringe_angles.size() < 8) throw ConfigError("fringe.angles", "at least 8 angles are required");
  if (!(sweep.b_min > 0.0 && sweep.b_min <= sweep.b_max && sweep.b_max <= 1.0)) {
    throw ConfigError("sweep", "need 0 < b_min <= b_max <= 1");
  }
  if (sweep.points < 1) throw ConfigError("sweep.points", "must be at least 1");
  if (targets.concurrence.size() != collections.size()) {
    throw ConfigError("targets.concurrence", "one target per collection is required");
  }
}

void apply_config_json(RunConfig& cfg, const json& doc, bool allow_preset_key) {
  reject_unknown(doc, "", {"preset", "seed", "z", "pump", "detection", "coherence", "collections", "state", "plan",
                           "analysis", "fringe", "sweep", "targets"});
  if (doc.contains("preset")) {
    if (!allow_preset_key) throw ConfigError("preset", "presets cannot name another preset");
    cfg.preset = text(doc["preset"], "preset");
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("z")) cfg.z = length(doc["z"], "z");
  if (doc.contains("state")) cfg.state = parse_enum(parse_state_kind, doc["state"], "state");

  if (doc.contains("pump")) {
    const json& p = doc["pump"];
    reject_unknown(p, "pump", {"wavelength", "sigma0", "ell_c", "A_p", "A_norm", "power"});
    if (p.contains("wavelength")) cfg.pump.wavelength = length(p["wavelength"], "pump.wavelength");
    if (p.contains("sigma0")) cfg.pump.sigma_0 = length(p["sigma0"], "pump.sigma0");
    if (p.contains("ell_c")) cfg.pump.ell_c = length(p["ell_c"], "pump.ell_c");
    if (p.contains("A_p")) cfg.pump.A_p = number(p["A_p"], "pump.A_p");
    if (p.contains("A_norm")) cfg.pump.A_norm = number(p["A_norm"], "pump.A_norm");
    if (p.contains("power")) cfg.pump.power = number(p["power"], "pump.power");
  }

  if (doc.contains("detection")) {
    const json& d = doc["detection"];
    reject_unknown(d, "detection", {"c1", "c2", "r_s", "r_i", "collection", "mode_filter", "depolarization"});
    if (d.contains("c1")) cfg.detection.c1 = number(d["c1"], "detection.c1");
    if (d.contains("c2")) cfg.detection.c2 = number(d["c2"], "detection.c2");
    if (d.contains("r_s")) cfg.detection.r_s = length(d["r_s"], "detection.r_s");
    if (d.contains("r_i")) cfg.detection.r_i = length(d["r_i"], "detection.r_i");
    if (d.contains("collection")) cfg.collection = text(d["collection"], "detection.collection");
    if (d.contains("depolarization")) cfg.detection.depolarization = number(d["depolarization"], "detection.depolarization");
    if (d.contains("mode_filter")) {
      const json& m = d["mode_filter"];
      reject_unknown(m, "detection.mode_filter", {"model", "scale"});
      if (m.contains("model")) {
        cfg.detection.mode_filter.model = parse_enum(parse_filter_model, m["model"], "detection.mode_filter.model");
      }
      if (m.contains("scale")) cfg.detection.mode_filter.scale = length(m["scale"], "detection.mode_filter.scale");
    }
  }

  if (doc.contains("coherence")) {
    const json& c = doc["coherence"];
    reject_unknown(c, "coherence", {"mode", "mu"});
    if (c.contains("mode")) cfg.mode = parse_enum(parse_coherence_mode, c["mode"], "coherence.mode");
    if (c.contains("mu")) cfg.mu = number(c["mu"], "coherence.mu");
  }

  if (doc.contains("collections")) {
    const json& list = doc["collections"];
    if (!list.is_array()) throw ConfigError("collections", "expected an array");
    cfg.collections.clear();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string path = "collections[" + std::to_string(k) + "]";
      reject_unknown(list[k], path, {"name", "label", "d_eff"});
      for (const char* key : {"name", "label", "d_eff"}) {
        if (!list[k].contains(key)) throw ConfigError(join(path, key), "missing");
      }
      cfg.collections.push_back({text(list[k]["name"], path + ".name"), length(list[k]["label"], path + ".label"),
                                 length(list[k]["d_eff"], path + ".d_eff")});
    }
  }

  if (doc.contains("plan")) {
    const json& p = doc["plan"];
    reject_unknown(p, "plan", {"duration_s", "repeats", "singles_rate_s", "singles_rate_i", "peak_coincidence_rate",
                               "window_s", "peak_reference", "sample_accidentals"});
    if (p.contains("duration_s")) cfg.plan.duration_s = number(p["duration_s"], "plan.duration_s");
    if (p.contains("repeats")) cfg.plan.repeats = integer(p["repeats"], "plan.repeats");
    if (p.contains("singles_rate_s")) cfg.plan.singles_rate_s = number(p["singles_rate_s"], "plan.singles_rate_s");
    if (p.contains("singles_rate_i")) cfg.plan.singles_rate_i = number(p["singles_rate_i"], "plan.singles_rate_i");
    if (p.contains("peak_coincidence_rate")) {
      cfg.plan.peak_coincidence_rate = number(p["peak_coincidence_rate"], "plan.peak_coincidence_rate");
    }
    if (p.contains("window_s")) cfg.plan.window = number(p["window_s"], "plan.window_s");
    if (p.contains("peak_reference")) {
      cfg.plan.peak_reference = parse_enum(parse_peak_reference, p["peak_reference"], "plan.peak_reference");
    }
    if (p.contains("sample_accidentals")) {
      cfg.plan.sample_accidentals = boolean(p["sample_accidentals"], "plan.sample_accidentals");
    }
  }

  if (doc.contains("analysis")) {
    const json& a = doc["analysis"];
    reject_unknown(a, "analysis", {"sigma_method", "bootstrap_samples"});
    if (a.contains("sigma_method")) {
      cfg.sigma_method = parse_enum(parse_sigma_method, a["sigma_method"], "analysis.sigma_method");
    }
    if (a.contains("bootstrap_samples")) {
      cfg.bootstrap_samples = integer(a["bootstrap_samples"], "analysis.bootstrap_samples");
    }
  }

  if (doc.contains("fringe")) {
    const json& f = doc["fringe"];
    reject_unknown(f, "fringe", {"angles"});
    if (f.contains("angles")) cfg.fringe_angles = number_list(f["angles"], "fringe.angles");
  }

  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    reject_unknown(s, "sweep", {"b_min", "b_max", "points"});
    if (s.contains("b_min")) cfg.sweep.b_min = number(s["b_min"], "sweep.b_min");
    if (s.contains("b_max")) cfg.sweep.b_max = number(s["b_max"], "sweep.b_max");
    if (s.contains("points")) cfg.sweep.points = integer(s["points"], "sweep.points");
  }

  if (doc.contains("targets")) {
    const json& t = doc["targets"];
    reject_unknown(t, "targets", {"v_hv", "v_ad", "bell_theory", "concurrence"});
    if (t.contains("v_hv")) cfg.targets.v_hv = number(t["v_hv"], "targets.v_hv");
    if (t.contains("v_ad")) cfg.targets.v_ad = number(t["v_ad"], "targets.v_ad");
    if (t.contains("bell_theory")) cfg.targets.bell_theory = number(t["bell_theory"], "targets.bell_theory");
    if (t.contains("concurrence")) cfg.targets.concurrence = number_list(t["concurrence"], "targets.concurrence");
  }
}

std::string preset_directory() {
  if (const char* env = std::getenv("LEDSPDC_PRESET_DIR"); env && *env) return env;
  return LEDSPDC_PRESET_DIR;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  std::error_code ec;
  for (const auto& entry : std::filesystem::directory_iterator(preset_directory(), ec)) {
    if (entry.path().extension() == ".json") out.push_back(entry.path().stem().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

RunConfig load_run_config(const ConfigSources& sources) {
  json doc = json::object();
  if (sources.config_path) doc = read_json_file(*sources.config_path);

  std::string preset = "default";
  if (doc.is_object() && doc.contains("preset")) preset = text(doc["preset"], "preset");
  if (sources.preset) preset = *sources.preset;

  RunConfig cfg;
  const std::string preset_path = preset_directory() + "/" + preset + ".json";
  if (!std::filesystem::exists(preset_path)) throw ConfigError("preset", "unknown preset '" + preset + "'");
  try {
    apply_config_json(cfg, read_json_file(preset_path), false);
  } catch (const ConfigError& e) {
    throw ConfigError(preset_path, e.what());
  }
  if (sources.config_path) {
    try {
      apply_config_json(cfg, doc, true);
    } catch (const ConfigError& e) {
      throw ConfigError(*sources.config_path, e.what());
    }
  }
  cfg.preset = preset;

  if (const char* env = std::getenv("LEDSPDC_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used, 10);
      if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
      cfg.seed = v;
    } catch (const std::exception&) {
      throw ConfigError("LEDSPDC_SEED", "expected a non-negative integer, got '" + std::string(env) + "'");
    }
  }
  if (sources.seed) cfg.seed = *sources.seed;
  if (sources.mode) cfg.mode = parse_enum(parse_coherence_mode, json(*sources.mode), "--mode");
  cfg.plan.seed = cfg.seed;
  cfg.validate();
  return cfg;
}

const CollectionConfig& selected_collection(const RunConfig& cfg) {
  for (const auto& c : cfg.collections)
    if (c.name == cfg.collection) return c;
  throw ConfigError("detection.collection", "no collection named '" + cfg.collection + "'");
}

SpdcSource make_source(const RunConfig& cfg) {
  DetectionParams det = cfg.detection;
  det.collection_scale = selected_collection(cfg).d_eff;
  try {
    return SpdcSource::make(cfg.pump, cfg.z, det, cfg.mode, cfg.mu);
  } catch (const DomainError& e) {
    throw ConfigError("source", e.what());
  }
}

}  // namespace ledspdc
