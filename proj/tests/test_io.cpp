#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ledspdc/errors.hpp"
#include "ledspdc/io.hpp"
#include "support.hpp"

using namespace ledspdc;

TEST_SUITE("io") {
  TEST_CASE("format_double round-trips") {
    for (double x : {0.0, 1.0, -2.5, 1e-300, 0.1, 2.0 * std::numbers::sqrt2}) {
      CHECK(std::stod(format_double(x)) == x);
    }
    CHECK(format_double(0.5) == "5.00000000000000000e-01");
  }

  TEST_CASE("density matrix JSON round trip is exact") {
    std::mt19937_64 gen(3);
    const Matrix4c rho = testsupport::random_state(gen).rho();
    const Json j = matrix_to_json(rho);
    CHECK(j["basis"] == Json::array({"HH", "HV", "VH", "VV"}));
    CHECK(matrix_from_json(Json::parse(j.dump())) == rho);
    Json bad = j;
    bad["basis"] = Json::array({"HH", "VH", "HV", "VV"});
    CHECK_THROWS_AS(matrix_from_json(bad), InputError);
  }

  TEST_CASE("settings and plans round trip") {
    const auto s = AnalyzerSetting::with_qwp(45.0, 22.5, 0.0, 67.5);
    CHECK(setting_from_json(to_json(s)) == s);
    const auto h = AnalyzerSetting::hwp(11.25, 33.75);
    CHECK(setting_from_json(to_json(h)) == h);
    AcquisitionPlan plan;
    plan.settings = {s, h};
    plan.seed = 123456789012345ULL;
    plan.repeats = 7;
    plan.peak_reference = PeakReference::plan;
    plan.sample_accidentals = true;
    const auto back = plan_from_json(Json::parse(to_json(plan).dump()));
    CHECK(back.settings == plan.settings);
    CHECK(back.seed == plan.seed);
    CHECK(back.repeats == 7);
    CHECK(back.peak_reference == PeakReference::plan);
    CHECK(back.sample_accidentals);
    CHECK(back.window == plan.window);
  }

  TEST_CASE("records JSONL round trip and determinism") {
    AcquisitionPlan plan;
    plan.settings = chsh_settings();
    plan.seed = 5;
    plan.repeats = 4;
    const auto recs = simulate(ProbabilityModel::from_state(werner(0.9)), plan);
    std::ostringstream os;
    write_records_jsonl(os, plan, recs);
    const std::string text = os.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 17);
    std::istringstream is(text);
    const auto [plan2, recs2] = read_records_jsonl(is);
    REQUIRE(recs2.size() == recs.size());
    for (std::size_t k = 0; k < recs.size(); ++k) {
      CHECK(recs2[k].setting == recs[k].setting);
      CHECK(recs2[k].raw_counts == recs[k].raw_counts);
      CHECK(recs2[k].corrected_mean == recs[k].corrected_mean);
      CHECK(recs2[k].corrected_sem == recs[k].corrected_sem);
    }
    std::ostringstream again;
    write_records_jsonl(again, plan2, recs2);
    CHECK(again.str() == text);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_records_jsonl(empty), InputError);
  }

  TEST_CASE("CHSH result JSON uses null for infinite statistics") {
    ChshResult r;
    r.s = 2.5;
    r.sigma_s = std::numeric_limits<double>::quiet_NaN();
    r.infinite_statistics = true;
    const Json j = to_json(r);
    CHECK(j["sigma_s"].is_null());
    const auto back = chsh_from_json(Json::parse(j.dump()));
    CHECK(back.s == 2.5);
    CHECK(std::isnan(back.sigma_s));
    CHECK(back.infinite_statistics);
    r.sigma_s = 0.05;
    r.infinite_statistics = false;
    CHECK(chsh_from_json(to_json(r)).sigma_s == 0.05);
  }

  TEST_CASE("fringe fit and tomography JSON round trip") {
    FringeFit f;
    f.basis = FringeBasis::ad;
    f.amplitude = 6.0;
    f.offset = 0.5;
    f.phase = 45.25;
    f.visibility = 6.0 / 7.0;
    const auto fb = fringe_fit_from_json(Json::parse(to_json(f).dump()));
    CHECK(fb.basis == FringeBasis::ad);
    CHECK(fb.phase == f.phase);
    CHECK(fb.visibility == f.visibility);

    TomographyResult t;
    t.rho_linear = bell_psi_plus().rho();
    t.rho_mle = werner(0.5);
    t.concurrence = 0.25;
    const auto tb = tomography_from_json(Json::parse(to_json(t).dump()));
    CHECK(tb.rho_linear == t.rho_linear);
    CHECK(tb.rho_mle.rho() == t.rho_mle.rho());
    CHECK(tb.concurrence == 0.25);
  }

  TEST_CASE("projection counts JSON") {
    Json j = Json::object();
    for (const auto& l : canonical_tomography_labels()) j[l] = 10.0;
    const auto counts = projection_counts_from_json(j);
    REQUIRE(counts.size() == 16);
    CHECK(counts[4].label == "RH");
    CHECK(counts[4].setting == tomography_setting("RH"));
    CHECK(to_json(counts) == j);
    j.erase("RL");
    CHECK_THROWS_AS(projection_counts_from_json(j), InputError);
  }

  TEST_CASE("CSV writers") {
    std::ostringstream sweep;
    write_sweep_csv(sweep, {SweepRow{0.5, 1e-5, "SMF", 5e-6, 0.7, false}, SweepRow{0.9, 2e-5, "SMF", 5e-6, 0.8, true}});
    std::istringstream lines(sweep.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "B,collection_scale_m,concurrence,clamped\r");
    std::getline(lines, line);
    CHECK(line == "5.00000000000000000e-01,5.00000000000000041e-06,6.99999999999999956e-01,false\r");
    std::getline(lines, line);
    CHECK(line.substr(line.size() - 5) == "true\r");

    std::ostringstream fringe;
    write_fringe_csv(fringe, {{0.0, 1.0, 0.1}});
    CHECK(fringe.str() == "hwp_angle_deg,mean,sem\r\n0.00000000000000000e+00,1.00000000000000000e+00,1.00000000000000006e-01\r\n");
  }
}
