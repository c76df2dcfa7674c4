#include <doctest.h>

#include <cmath>

#include "tte/error.hpp"
#include "tte/sim.hpp"

using namespace tte;

namespace {

Scenario constant_scenario(double rate, int n, double cutoff) {
  Scenario sc;
  sc.hazard_control = {{0.0, rate}};
  sc.hazard_experimental = {{0.0, rate}};
  sc.accrual = 1.0;
  sc.cutoff = cutoff;
  sc.n_per_arm = n;
  sc.seed = 31415;
  return sc;
}

double mean_endpoint_time(const Cohort& cohort, const std::string& kind) {
  double sum = 0.0;
  int n = 0;
  for (const auto& s : cohort.subjects)
    for (const auto& e : s.events)
      if (e.kind == kind) {
        sum += e.time;
        ++n;
      }
  REQUIRE(n > 0);
  return sum / n;
}

std::string cohort_fingerprint(const Cohort& c) {
  std::string out;
  for (const auto& s : c.subjects) {
    out += s.subject_id + "|" + s.arm + "|" + std::to_string(s.entry_calendar_time);
    for (const auto& e : s.events) out += ";" + e.kind + "@" + std::to_string(e.time);
    out += "\n";
  }
  return out;
}

}  // namespace

TEST_CASE("unit-rate exponential endpoint has mean about 1") {
  auto cohort = simulate_cohort(constant_scenario(1.0, 10000, 1000.0));
  CHECK(std::fabs(mean_endpoint_time(cohort, "endpoint") - 1.0) < 0.03);
}

TEST_CASE("piecewise degeneracy: splitting a constant hazard changes nothing") {
  auto single = constant_scenario(1.0, 1000, 1000.0);
  auto split_pieces = single;
  split_pieces.hazard_control = {{0.0, 1.0}, {1.0, 1.0}};
  split_pieces.hazard_experimental = {{0.0, 1.0}, {1.0, 1.0}};
  CHECK(cohort_fingerprint(simulate_cohort(single)) ==
        cohort_fingerprint(simulate_cohort(split_pieces)));
}

TEST_CASE("same seed gives an identical cohort; different seed does not") {
  auto sc = constant_scenario(0.8, 500, 50.0);
  sc.dropout_rate = 0.1;
  sc.intercurrent["NALT"] = {0.2, 0.1};
  auto a = simulate_cohort(sc);
  auto b = simulate_cohort(sc);
  CHECK(cohort_fingerprint(a) == cohort_fingerprint(b));
  sc.seed += 1;
  CHECK(cohort_fingerprint(simulate_cohort(sc)) != cohort_fingerprint(a));
}

TEST_CASE("scenario validation diagnostics") {
  auto sc = constant_scenario(1.0, 100, 10.0);
  sc.hazard_control[0].rate = -1;
  CHECK_THROWS_AS(simulate_cohort(sc), Error);
  sc = constant_scenario(1.0, 100, 10.0);
  sc.hazard_experimental = {{0.5, 1.0}};  // must start at 0
  CHECK_THROWS_AS(simulate_cohort(sc), Error);
  sc = constant_scenario(1.0, 0, 10.0);
  CHECK_THROWS_AS(simulate_cohort(sc), Error);
  sc = constant_scenario(1.0, 100, -1.0);
  CHECK_THROWS_AS(simulate_cohort(sc), Error);
}

TEST_CASE("scenario files parse") {
  auto sc = parse_scenario(R"(
[scenario]
n_per_arm = 50
accrual = 365
cutoff = 548
dropout_rate = 0.001
seed = 7
hazard.control = 0:0.002
hazard.experimental = 0:0.002, 365:0.001

[scenario.intercurrent.NALT]
control = 0.0005
experimental = 0.0002
)");
  CHECK(sc.n_per_arm == 50);
  CHECK(sc.hazard_experimental.size() == 2);
  CHECK(sc.intercurrent.at("NALT").first == doctest::Approx(0.0005));
  CHECK_THROWS_AS(parse_scenario("[scenario]\nn_per_arm = 10\n"), Error);
}

TEST_CASE("shipped scenario files parse and validate") {
  for (const char* name : {"delayed_effect.cfg", "proportional.cfg"}) {
    auto sc = parse_scenario_file(std::string(DOCS_DIR) + "/scenarios/" + name);
    CHECK(sc.n_per_arm > 0);
    CHECK_NOTHROW(sc.validate());
  }
}

TEST_CASE("true average effect: proportional hazards give the constant exactly") {
  Scenario sc;
  sc.hazard_control = {{0.0, 1.0}};
  sc.hazard_experimental = {{0.0, 2.0}};
  sc.accrual = 1.0;
  sc.cutoff = 10.0;
  sc.n_per_arm = 10;
  CHECK(std::fabs(true_average_effect(sc, 10.0) - std::log(2.0)) < 1e-9);
  CHECK(std::fabs(true_average_effect(sc, 0.5) - std::log(2.0)) < 1e-9);
}

TEST_CASE("true average effect: quadrature agrees with the closed piecewise form") {
  // delayed effect: beta = 0 before 1, log 0.5 after; control hazard 0.3
  Scenario sc;
  sc.hazard_control = {{0.0, 0.3}};
  sc.hazard_experimental = {{0.0, 0.3}, {1.0, 0.15}};
  sc.accrual = 1.0;
  sc.cutoff = 6.0;
  sc.n_per_arm = 10;

  auto closed_form = [&](double tau) {
    // int beta dF splits at t=1; F = (F_c + F_e)/2 with exponential pieces
    auto surv_c = [](double t) { return std::exp(-0.3 * t); };
    auto surv_e = [](double t) {
      return t <= 1.0 ? std::exp(-0.3 * t) : std::exp(-0.3 - 0.15 * (t - 1.0));
    };
    const double mass_after_1 =
        0.5 * ((surv_c(1.0) - surv_c(tau)) + (surv_e(1.0) - surv_e(tau)));
    const double total = 1.0 - 0.5 * (surv_c(tau) + surv_e(tau));
    return std::log(0.5) * mass_after_1 / total;
  };

  for (double tau : {1.5, 6.0}) {
    CHECK(std::fabs(true_average_effect(sc, tau) - closed_form(tau)) < 1e-6);
  }
  // frozen reference values from the closed form
  CHECK(true_average_effect(sc, 1.5) == doctest::Approx(-0.16091).epsilon(1e-3));
  CHECK(true_average_effect(sc, 6.0) == doctest::Approx(-0.45116).epsilon(1e-3));
}

TEST_CASE("true average effect: balanced masses integrate to zero") {
  // beta = +c before t*, -c after; t* at the median of the pooled F makes
  // the integral vanish. With symmetric rates the pooled F is found
  // numerically by bisection on the closed form.
  const double c = 0.4;
  const double up = std::exp(c), down = std::exp(-c);
  auto build = [&](double t_star) {
    Scenario sc;
    sc.hazard_control = {{0.0, 1.0}};
    sc.hazard_experimental = {{0.0, up}, {t_star, down}};
    sc.accrual = 1.0;
    sc.cutoff = 60.0;
    sc.n_per_arm = 10;
    return sc;
  };
  auto mass_balance = [&](double t_star) {
    auto surv_c = [](double t) { return std::exp(-t); };
    auto surv_e = [&](double t) {
      return t <= t_star ? std::exp(-up * t)
                         : std::exp(-up * t_star - down * (t - t_star));
    };
    const double tau = 60.0;
    const double before = 1.0 - 0.5 * (surv_c(t_star) + surv_e(t_star));
    const double after = 0.5 * ((surv_c(t_star) - surv_c(tau)) + (surv_e(t_star) - surv_e(tau)));
    return before - after;
  };
  double lo = 0.01, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2;
    (mass_balance(mid) < 0 ? lo : hi) = mid;
  }
  const double t_star = (lo + hi) / 2;
  CHECK(std::fabs(true_average_effect(build(t_star), 60.0)) < 1e-6);
}

TEST_CASE("experiment validates its arguments") {
  auto sc = constant_scenario(1.0, 10, 10.0);
  try {
    censoring_dependence_experiment(sc, {5.0}, 2, 1);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.code() == errc::too_few_regimes);
  }
  CHECK_THROWS_AS(censoring_dependence_experiment(sc, {5.0, 10.0}, 0, 1), Error);
}

TEST_CASE("experiment is reproducible and thread-count independent") {
  Scenario sc;
  sc.hazard_control = {{0.0, 1.0}};
  sc.hazard_experimental = {{0.0, 2.0}};
  sc.accrual = 0.5;
  sc.cutoff = 4.0;
  sc.n_per_arm = 300;
  auto a = censoring_dependence_experiment(sc, {2.0, 4.0}, 4, 99, 1);
  auto b = censoring_dependence_experiment(sc, {2.0, 4.0}, 4, 99, 2);
  REQUIRE(a.regimes.size() == b.regimes.size());
  for (std::size_t i = 0; i < a.regimes.size(); ++i) {
    CHECK(a.regimes[i].mean_cox == b.regimes[i].mean_cox);
    CHECK(a.regimes[i].mean_xoq == b.regimes[i].mean_xoq);
  }
  CHECK(a.cox_drift == b.cox_drift);
  CHECK(a.xoq_drift == b.xoq_drift);
}

TEST_CASE("delayed-effect scenario: avg-effect drift is strictly below Cox drift") {
  Scenario sc;
  sc.hazard_control = {{0.0, 0.3}};
  sc.hazard_experimental = {{0.0, 0.3}, {1.0, 0.15}};
  sc.accrual = 1.0;
  sc.cutoff = 6.0;
  sc.n_per_arm = 4000;
  auto rep = censoring_dependence_experiment(sc, {1.5, 6.0}, 6, 2468, 2);
  CHECK(rep.xoq_drift < rep.cox_drift);
  // the windowed estimand moves between regimes; net of it, the average
  // effect barely drifts while Cox does
  CHECK(rep.xoq_excess_drift < rep.cox_excess_drift);
  for (const auto& regime : rep.regimes)
    CHECK(std::fabs(regime.mean_xoq - regime.true_beta_bar) < 0.05);
}

TEST_CASE("experiment under proportional hazards: both estimators sit at the truth") {
  Scenario sc;
  sc.hazard_control = {{0.0, 1.0}};
  sc.hazard_experimental = {{0.0, 2.0}};
  sc.accrual = 0.5;
  sc.cutoff = 4.0;
  sc.n_per_arm = 2000;
  auto rep = censoring_dependence_experiment(sc, {1.0, 4.0}, 5, 7, 2);
  for (const auto& regime : rep.regimes) {
    CHECK(std::fabs(regime.true_beta_bar - std::log(2.0)) < 1e-6);
    CHECK(std::fabs(regime.mean_cox - std::log(2.0)) < 3.0 * regime.sd_cox + 0.05);
    CHECK(std::fabs(regime.mean_xoq - std::log(2.0)) < 3.0 * regime.sd_xoq + 0.05);
  }
  CHECK(rep.cox_drift < 0.08);
  CHECK(rep.xoq_drift < 0.08);
}
