#include "ledspdc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>

#include "ledspdc/errors.hpp"

namespace ledspdc {

namespace {

Json optional_angle(const std::optional<double>& a) { return a ? Json(*a) : Json(nullptr); }

std::optional<double> angle_from(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

double number_or_nan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17e", x);
  std::string s(buf);
  for (char& c : s)
    if (c == ',') c = '.';
  return s;
}

Json matrix_to_json(const Matrix4c& m) {
  Json rows = Json::array();
  for (int i = 0; i < 4; ++i) {
    Json row = Json::array();
    for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return {{"basis", {"HH", "HV", "VH", "VV"}}, {"rho", rows}};
}

Matrix4c matrix_from_json(const Json& j) {
  const Json expected_basis = {"HH", "HV", "VH", "VV"};
  if (j.at("basis") != expected_basis) throw InputError("density matrix basis must be [HH, HV, VH, VV]");
  const Json& rows = j.at("rho");
  if (rows.size() != 4) throw InputError("density matrix must have 4 rows");
  Matrix4c m;
  for (int i = 0; i < 4; ++i) {
    const Json& row = rows.at(static_cast<std::size_t>(i));
    if (row.size() != 4) throw InputError("density matrix rows must have 4 entries");
    for (int k = 0; k < 4; ++k) {
      const Json& e = row.at(static_cast<std::size_t>(k));
      m(i, k) = Complex(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return m;
}

Json to_json(const AnalyzerSetting& s) {
  return {{"hwp_s", s.hwp_s}, {"hwp_i", s.hwp_i}, {"qwp_s", optional_angle(s.qwp_s)}, {"qwp_i", optional_angle(s.qwp_i)}};
}

AnalyzerSetting setting_from_json(const Json& j) {
  AnalyzerSetting s;
  s.hwp_s = j.at("hwp_s").get<double>();
  s.hwp_i = j.at("hwp_i").get<double>();
  s.qwp_s = angle_from(j, "qwp_s");
  s.qwp_i = angle_from(j, "qwp_i");
  return s.normalized();
}

Json to_json(const AcquisitionPlan& plan) {
  Json settings = Json::array();
  for (const auto& s : plan.settings) settings.push_back(to_json(s));
  return {{"settings", settings},
          {"duration_s", plan.duration_s},
          {"repeats", plan.repeats},
          {"singles_rate_s", plan.singles_rate_s},
          {"singles_rate_i", plan.singles_rate_i},
          {"peak_coincidence_rate", plan.peak_coincidence_rate},
          {"window_s", plan.window},
          {"seed", plan.seed},
          {"peak_reference", to_string(plan.peak_reference)},
          {"sample_accidentals", plan.sample_accidentals}};
}

AcquisitionPlan plan_from_json(const Json& j) {
  AcquisitionPlan plan;
  for (const auto& s : j.at("settings")) plan.settings.push_back(setting_from_json(s));
  plan.duration_s = j.at("duration_s").get<double>();
  plan.repeats = j.at("repeats").get<int>();
  plan.singles_rate_s = j.at("singles_rate_s").get<double>();
  plan.singles_rate_i = j.at("singles_rate_i").get<double>();
  plan.peak_coincidence_rate = j.at("peak_coincidence_rate").get<double>();
  plan.window = j.at("window_s").get<double>();
  plan.seed = j.at("seed").get<std::uint64_t>();
  plan.peak_reference = parse_peak_reference(j.at("peak_reference").get<std::string>());
  plan.sample_accidentals = j.at("sample_accidentals").get<bool>();
  return plan;
}

Json to_json(const CoincidenceRecord& r) {
  return {{"setting", to_json(r.setting)},
          {"duration_s", r.duration_s},
          {"raw_counts", r.raw_counts},
          {"singles_s", r.singles_s},
          {"singles_i", r.singles_i},
          {"accidental_estimate", r.accidental_estimate},
          {"corrected_mean", r.corrected_mean},
          {"corrected_sem", r.corrected_sem},
          {"exact", r.exact}};
}

CoincidenceRecord record_from_json(const Json& j) {
  CoincidenceRecord r;
  r.setting = setting_from_json(j.at("setting"));
  r.duration_s = j.at("duration_s").get<double>();
  r.raw_counts = j.at("raw_counts").get<std::vector<std::uint64_t>>();
  r.singles_s = j.at("singles_s").get<double>();
  r.singles_i = j.at("singles_i").get<double>();
  r.accidental_estimate = j.at("accidental_estimate").get<double>();
  r.corrected_mean = j.at("corrected_mean").get<double>();
  r.corrected_sem = j.at("corrected_sem").get<double>();
  r.exact = j.at("exact").get<bool>();
  return r;
}

void write_records_jsonl(std::ostream& os, const AcquisitionPlan& plan, const std::vector<CoincidenceRecord>& records) {
  Json header = to_json(plan);
  header["type"] = "plan";
  os << header.dump() << '\n';
  for (const auto& r : records) {
    Json line = to_json(r);
    line["type"] = "record";
    os << line.dump() << '\n';
  }
}

std::pair<AcquisitionPlan, std::vector<CoincidenceRecord>> read_records_jsonl(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw InputError("records file is empty");
  const Json header = Json::parse(line);
  if (header.value("type", "") != "plan") throw InputError("records file must start with a plan header");
  std::pair<AcquisitionPlan, std::vector<CoincidenceRecord>> out;
  out.first = plan_from_json(header);
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const Json j = Json::parse(line);
    if (j.value("type", "") != "record") throw InputError("expected a record line");
    out.second.push_back(record_from_json(j));
  }
  return out;
}

Json to_json(const ChshResult& r) {
  return {{"e_values", r.e_values},
          {"s", r.s},
          {"sigma_s", r.infinite_statistics ? Json(nullptr) : Json(r.sigma_s)},
          {"infinite_statistics", r.infinite_statistics},
          {"sigma_method", to_string(r.sigma_method)}};
}

ChshResult chsh_from_json(const Json& j) {
  ChshResult r;
  r.e_values = j.at("e_values").get<std::array<double, 4>>();
  r.s = j.at("s").get<double>();
  r.sigma_s = number_or_nan(j.at("sigma_s"));
  r.infinite_statistics = j.at("infinite_statistics").get<bool>();
  r.sigma_method = parse_sigma_method(j.at("sigma_method").get<std::string>());
  return r;
}

Json to_json(const FringeFit& f) {
  return {{"basis", to_string(f.basis)},       {"amplitude", f.amplitude},     {"offset", f.offset},
          {"phase_deg", f.phase},              {"visibility", f.visibility},   {"residual_rms", f.residual_rms},
          {"iterations", f.iterations}};
}

FringeFit fringe_fit_from_json(const Json& j) {
  FringeFit f;
  f.basis = parse_fringe_basis(j.at("basis").get<std::string>());
  f.amplitude = j.at("amplitude").get<double>();
  f.offset = j.at("offset").get<double>();
  f.phase = j.at("phase_deg").get<double>();
  f.visibility = j.at("visibility").get<double>();
  f.residual_rms = j.at("residual_rms").get<double>();
  f.iterations = j.at("iterations").get<int>();
  return f;
}

Json to_json(const TomographyResult& r, const std::string& method) {
  return {{"method", method},
          {"rho_linear", matrix_to_json(r.rho_linear)},
          {"rho", matrix_to_json(r.rho_mle.rho())},
          {"log_likelihood", r.log_likelihood},
          {"concurrence", r.concurrence},
          {"purity", r.purity},
          {"fidelity_psi_plus", r.fidelity_psi_plus},
          {"iterations", r.iterations},
          {"evaluations", r.evaluations},
          {"converged", r.converged}};
}

TomographyResult tomography_from_json(const Json& j) {
  TomographyResult r;
  r.rho_linear = matrix_from_json(j.at("rho_linear"));
  r.rho_mle = TwoQubitState::from_numerical(matrix_from_json(j.at("rho")));
  r.log_likelihood = j.at("log_likelihood").get<double>();
  r.concurrence = j.at("concurrence").get<double>();
  r.purity = j.at("purity").get<double>();
  r.fidelity_psi_plus = j.at("fidelity_psi_plus").get<double>();
  r.iterations = j.at("iterations").get<long>();
  r.evaluations = j.at("evaluations").get<long>();
  r.converged = j.at("converged").get<bool>();
  return r;
}

std::vector<ProjectionCount> projection_counts_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("tomography counts must be a JSON object of label -> counts");
  std::vector<ProjectionCount> out;
  const auto& canonical = canonical_tomography_labels();
  for (const auto& label : canonical) {
    if (!j.contains(label)) throw InputError("tomography counts are missing projection " + label);
  }
  auto add = [&out](const std::string& label, const Json& value) {
    if (!value.is_number()) throw InputError("tomography counts for " + label + " must be a number");
    out.push_back({label, tomography_setting(label), value.get<double>()});
  };
  for (const auto& label : canonical) add(label, j.at(label));
  for (const auto& [label, value] : j.items()) {
    if (std::find(canonical.begin(), canonical.end(), label) == canonical.end()) add(label, value);
  }
  return out;
}

Json to_json(const std::vector<ProjectionCount>& counts) {
  Json j = Json::object();
  for (const auto& c : counts) j[c.label] = c.counts;
  return j;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "B,collection_scale_m,concurrence,clamped\r\n";
  for (const auto& r : rows) {
    os << format_double(r.b) << ',' << format_double(r.collection_scale) << ',' << format_double(r.concurrence)
       << ',' << (r.clamped ? "true" : "false") << "\r\n";
  }
}

void write_fringe_csv(std::ostream& os, const std::vector<FringePoint>& points) {
  os << "hwp_angle_deg,mean,sem\r\n";
  for (const auto& p : points) {
    os << format_double(p.angle_deg) << ',' << format_double(p.mean) << ',' << format_double(p.sem) << "\r\n";
  }
}

}  // namespace ledspdc
