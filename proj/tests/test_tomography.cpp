#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "ledspdc/errors.hpp"
#include "ledspdc/linalg.hpp"
#include "ledspdc/tomography.hpp"
#include "support.hpp"

using namespace ledspdc;

namespace {

std::vector<ProjectionCount> ideal_counts(const TwoQubitState& state, double total = 1.0) {
  std::vector<ProjectionCount> out;
  for (const auto& label : canonical_tomography_labels()) {
    ProjectionCount pc;
    pc.label = label;
    pc.setting = tomography_setting(label);
    pc.counts = total * probability(state, pc.setting);
    out.push_back(pc);
  }
  return out;
}

Ket2 ket_of(char c) {
  const double r = 1.0 / std::sqrt(2.0);
  switch (c) {
    case 'H': return Ket2(1.0, 0.0);
    case 'V': return Ket2(0.0, 1.0);
    case 'D': return Ket2(r, r);
    case 'A': return Ket2(r, -r);
    case 'R': return Ket2(r, Complex(0.0, r));
    default: return Ket2(r, Complex(0.0, -r));
  }
}

}  // namespace

TEST_SUITE("tomography") {
  TEST_CASE("single-arm settings analyze the named polarizations") {
    for (char c : std::string("HVDARL")) {
      const Ket2 got = analyzed_ket(tomography_setting(std::string{c, 'H'}).hwp_s,
                                    tomography_setting(std::string{c, 'H'}).qwp_s);
      CHECK(std::abs(got.dot(ket_of(c))) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(tomography_setting("HX"), InputError);
    CHECK_THROWS_AS(tomography_setting("H"), InputError);
  }

  TEST_CASE("canonical set has 16 distinct labels") {
    const auto& labels = canonical_tomography_labels();
    CHECK(labels.size() == 16);
    CHECK(std::set<std::string>(labels.begin(), labels.end()).size() == 16);
  }

  TEST_CASE("linear inversion reproduces the state from exact counts") {
    std::mt19937_64 gen(7);
    for (int k = 0; k < 1000; ++k) {
      const auto rho = k % 2 ? testsupport::random_state(gen) : testsupport::random_pure_state(gen);
      const Matrix4c est = tomo_linear(ideal_counts(rho, 1.0 + k));
      CHECK((est - rho.rho()).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  TEST_CASE("maximally mixed state") {
    const Matrix4c est = tomo_linear(ideal_counts(maximally_mixed(), 400.0));
    CHECK((est - Matrix4c::Identity() / 4.0).cwiseAbs().maxCoeff() < 1e-12);
    const auto r = tomo_mle(ideal_counts(maximally_mixed(), 400.0));
    CHECK(r.purity == doctest::Approx(0.25).epsilon(1e-6));
    CHECK(r.concurrence < 1e-6);
  }

  TEST_CASE("MLE of psi+ from exact counts") {
    const auto r = tomo_mle(ideal_counts(bell_psi_plus(), 1000.0));
    CHECK(r.fidelity_psi_plus > 0.9999);
    CHECK(r.concurrence > 0.999);
    CHECK(r.purity > 0.999);
  }

  TEST_CASE("MLE likelihood is at least that of the physical projection") {
    const auto truth = werner(0.7);
    AcquisitionPlan plan;
    for (const auto& l : canonical_tomography_labels()) plan.settings.push_back(tomography_setting(l));
    plan.seed = 13;
    plan.repeats = 20;
    const auto counts = projection_counts(simulate(ProbabilityModel::from_state(truth), plan));
    const auto r = tomo_mle(counts);
    const Matrix4c proj = project_to_physical(r.rho_linear);
    CHECK(r.log_likelihood >= tomography_log_likelihood(counts, proj) - 1e-9);
    CHECK(r.log_likelihood == doctest::Approx(tomography_log_likelihood(counts, r.rho_mle.rho())));
    CHECK(r.rho_mle.rho().trace().real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(r.rho_mle, truth) > 0.9);
  }

  TEST_CASE("projection counts from records carry canonical labels") {
    AcquisitionPlan plan;
    for (const auto& l : canonical_tomography_labels()) plan.settings.push_back(tomography_setting(l));
    plan.repeats = 10;
    const auto counts = projection_counts(simulate(ProbabilityModel::from_state(bell_psi_plus()), plan));
    REQUIRE(counts.size() == 16);
    for (std::size_t k = 0; k < 16; ++k) {
      CHECK(counts[k].label == canonical_tomography_labels()[k]);
      CHECK(counts[k].counts >= 0.0);
    }
  }

  TEST_CASE("incomplete projector sets are configuration errors") {
    auto counts = ideal_counts(bell_psi_plus(), 10.0);
    for (auto& c : counts) c.setting = AnalyzerSetting::hwp(c.setting.hwp_s, c.setting.hwp_i);
    CHECK_THROWS_AS(tomo_linear(counts), ConfigError);
    auto short_set = ideal_counts(bell_psi_plus(), 10.0);
    short_set.pop_back();
    CHECK_THROWS_AS(tomo_linear(short_set), ConfigError);
    auto zero = ideal_counts(bell_psi_plus(), 0.0);
    CHECK_THROWS_AS(tomo_linear(zero), InputError);
  }

  TEST_CASE("Cholesky parameterization round trip") {
    std::mt19937_64 gen(31);
    for (int k = 0; k < 100; ++k) {
      const auto rho = testsupport::random_state(gen);
      const Eigen::VectorXd t = cholesky_parameters(rho.rho());
      CHECK(t.size() == 16);
      CHECK((state_from_parameters(t) - rho.rho()).cwiseAbs().maxCoeff() < 1e-12);
    }
    Eigen::VectorXd t = Eigen::VectorXd::Zero(16);
    t(0) = 2.0;
    const Matrix4c hh = state_from_parameters(t);
    CHECK(hh(0, 0).real() == doctest::Approx(1.0));
  }
}
