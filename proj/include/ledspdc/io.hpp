#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ledspdc/chsh.hpp"
#include "ledspdc/expsim.hpp"
#include "ledspdc/fringe.hpp"
#include "ledspdc/spdc.hpp"
#include "ledspdc/tomography.hpp"

namespace ledspdc {

using Json = nlohmann::json;

/// %.17e, '.' decimal regardless of locale.
std::string format_double(double x);

/// {"basis": ["HH","HV","VH","VV"], "rho": 4x4 of [re, im]}
Json matrix_to_json(const Matrix4c& m);
Matrix4c matrix_from_json(const Json& j);

Json to_json(const AnalyzerSetting& s);
AnalyzerSetting setting_from_json(const Json& j);

Json to_json(const AcquisitionPlan& plan);
AcquisitionPlan plan_from_json(const Json& j);

Json to_json(const CoincidenceRecord& r);
CoincidenceRecord record_from_json(const Json& j);

/// Header line {"type": "plan", ...} followed by one {"type": "record", ...} line per record.
void write_records_jsonl(std::ostream& os, const AcquisitionPlan& plan, const std::vector<CoincidenceRecord>& records);
std::pair<AcquisitionPlan, std::vector<CoincidenceRecord>> read_records_jsonl(std::istream& is);

/// sigma_s is null when infinite_statistics is set.
Json to_json(const ChshResult& r);
ChshResult chsh_from_json(const Json& j);

Json to_json(const FringeFit& f);
FringeFit fringe_fit_from_json(const Json& j);

/// "method" is "mle" or "linear"; "rho" holds the MLE state or the physical projection.
Json to_json(const TomographyResult& r, const std::string& method = "mle");
TomographyResult tomography_from_json(const Json& j);

/// {"HH": 12.0, "HV": 230.5, ...}. The canonical 16 labels are required and come first, in
/// canonical order; any further labels follow in document order.
std::vector<ProjectionCount> projection_counts_from_json(const Json& j);
Json to_json(const std::vector<ProjectionCount>& counts);

/// Header "B,collection_scale_m,concurrence,clamped".
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// Header "hwp_angle_deg,mean,sem".
void write_fringe_csv(std::ostream& os, const std::vector<FringePoint>& points);

}  // namespace ledspdc
