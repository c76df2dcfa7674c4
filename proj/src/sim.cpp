#include "tte/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tte/config.hpp"
#include "tte/cox.hpp"
#include "tte/error.hpp"
#include "tte/estimand.hpp"
#include "tte/numeric.hpp"
#include "tte/rng.hpp"

namespace tte {

namespace {

void validate_pieces(const std::vector<HazardPiece>& pieces, const char* which) {
  if (pieces.empty())
    fail(errc::invalid_scenario, std::string(which) + ": at least one hazard piece required");
  if (pieces.front().start != 0.0)
    fail(errc::invalid_scenario, std::string(which) + ": first piece must start at 0");
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (!(pieces[i].rate > 0) || !std::isfinite(pieces[i].rate))
      fail(errc::invalid_scenario, std::string(which) + ": rates must be positive and finite");
    if (i > 0 && !(pieces[i].start > pieces[i - 1].start))
      fail(errc::invalid_scenario, std::string(which) + ": piece starts must increase");
  }
}

double cumulative_hazard(const std::vector<HazardPiece>& pieces, double t) {
  double h = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const double end = i + 1 < pieces.size() ? pieces[i + 1].start : t;
    if (t <= pieces[i].start) break;
    h += pieces[i].rate * (std::min(t, end) - pieces[i].start);
  }
  return h;
}

double rate_at(const std::vector<HazardPiece>& pieces, double t) {
  double r = pieces.front().rate;
  for (const auto& p : pieces)
    if (t >= p.start) r = p.rate;
  return r;
}

// Inverse of the piecewise-linear cumulative hazard at -log(u).
double sample_piecewise(const std::vector<HazardPiece>& pieces, double u) {
  const double target = -std::log(u);
  double acc = 0.0;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const bool last = i + 1 == pieces.size();
    const double len = last ? 0.0 : pieces[i + 1].start - pieces[i].start;
    const double piece_h = last ? 0.0 : pieces[i].rate * len;
    if (last || target <= acc + piece_h)
      return pieces[i].start + (target - acc) / pieces[i].rate;
    acc += piece_h;
  }
  return 0.0;  // unreachable
}

}  // namespace

void Scenario::validate() const {
  validate_pieces(hazard_control, "hazard_control");
  validate_pieces(hazard_experimental, "hazard_experimental");
  if (!(accrual > 0)) fail(errc::invalid_scenario, "accrual must be positive");
  if (!(cutoff > 0)) fail(errc::invalid_scenario, "cutoff must be positive");
  if (dropout_rate < 0) fail(errc::invalid_scenario, "dropout_rate must be >= 0");
  if (n_per_arm < 1) fail(errc::invalid_scenario, "n_per_arm must be >= 1");
  if (endpoint_kind.empty()) fail(errc::invalid_scenario, "endpoint_kind must be non-empty");
  for (const auto& [kind, rates] : intercurrent) {
    if (kind.empty()) fail(errc::invalid_scenario, "intercurrent kind must be non-empty");
    if (rates.first < 0 || rates.second < 0)
      fail(errc::invalid_scenario, "intercurrent rates must be >= 0");
  }
}

namespace {

std::vector<HazardPiece> parse_pieces(const std::string& text, const std::string& what) {
  std::vector<HazardPiece> pieces;
  for (const auto& part : split(text, ',')) {
    const auto sep = part.find(':');
    if (sep == std::string::npos)
      fail(errc::parse_error, what + ": expected 'start:rate' pieces, got '" + trim(part) + "'");
    pieces.push_back({parse_number(part.substr(0, sep), what + " start"),
                      parse_number(part.substr(sep + 1), what + " rate")});
  }
  return pieces;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  const ConfigDoc doc = ConfigDoc::parse(text);
  if (!doc.has_section("scenario"))
    fail(errc::missing_attribute, "scenario file is missing the [scenario] section");
  Scenario sc;
  sc.hazard_control = parse_pieces(doc.require("scenario", "hazard.control"), "hazard.control");
  sc.hazard_experimental =
      parse_pieces(doc.require("scenario", "hazard.experimental"), "hazard.experimental");
  sc.accrual = doc.require_number("scenario", "accrual");
  sc.cutoff = doc.require_number("scenario", "cutoff");
  sc.dropout_rate = doc.get_number("scenario", "dropout_rate").value_or(0.0);
  sc.n_per_arm = static_cast<int>(doc.require_number("scenario", "n_per_arm"));
  sc.seed = static_cast<std::uint64_t>(doc.require_number("scenario", "seed"));
  if (auto k = doc.get("scenario", "endpoint_kind")) sc.endpoint_kind = trim(*k);
  for (const auto& section : doc.sections_with_prefix("scenario.intercurrent")) {
    const std::string prefix = "scenario.intercurrent.";
    if (section.size() <= prefix.size())
      fail(errc::parse_error, "use [scenario.intercurrent.<kind>] sections");
    const std::string kind = section.substr(prefix.size());
    sc.intercurrent[kind] = {doc.get_number(section, "control").value_or(0.0),
                             doc.get_number(section, "experimental").value_or(0.0)};
  }
  sc.validate();
  return sc;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

Cohort simulate_cohort(const Scenario& scenario) {
  scenario.validate();

  Cohort cohort;
  cohort.cutoff_calendar_time = scenario.cutoff;
  cohort.subjects.reserve(static_cast<std::size_t>(2 * scenario.n_per_arm));

  std::uint64_t index = 0;
  for (int arm = 0; arm < 2; ++arm) {
    const bool experimental = arm == 1;
    const auto& hazard = experimental ? scenario.hazard_experimental : scenario.hazard_control;
    for (int i = 0; i < scenario.n_per_arm; ++i, ++index) {
      Rng rng(derive_seed(scenario.seed, index));
      SubjectTimeline s;
      s.subject_id = (experimental ? "e" : "c") + std::to_string(i + 1);
      s.arm = experimental ? arms::experimental : arms::control;
      s.entry_calendar_time = rng.uniform(0.0, scenario.accrual);

      const double endpoint_time = sample_piecewise(hazard, rng.uniform());
      s.events.push_back({scenario.endpoint_kind, endpoint_time});
      if (scenario.dropout_rate > 0)
        s.events.push_back({"dropout", rng.exponential(scenario.dropout_rate)});
      for (const auto& [kind, rates] : scenario.intercurrent) {
        const double rate = experimental ? rates.second : rates.first;
        if (rate > 0) s.events.push_back({kind, rng.exponential(rate)});
      }

      // death is terminal in the event model; drop anything drawn after it.
      if (scenario.endpoint_kind == kinds::death)
        std::erase_if(s.events, [endpoint_time](const ClinicalEvent& e) {
          return e.time > endpoint_time;
        });

      s = validate_timeline(std::move(s));
      s = apply_clinical_cutoff(std::move(s), scenario.cutoff);
      cohort.subjects.push_back(std::move(s));
    }
  }
  return cohort;
}

double true_average_effect(const Scenario& scenario, double cutoff_regime) {
  scenario.validate();
  if (!(cutoff_regime > 0))
    fail(errc::invalid_scenario, "true_average_effect: cutoff regime must be positive");
  const double tau = cutoff_regime;

  auto survival = [](const std::vector<HazardPiece>& pieces, double t) {
    return std::exp(-cumulative_hazard(pieces, t));
  };
  // Pooled failure density and the log hazard ratio at t.
  auto integrand = [&](double t) {
    const double fc = rate_at(scenario.hazard_control, t) * survival(scenario.hazard_control, t);
    const double fe = rate_at(scenario.hazard_experimental, t) *
                      survival(scenario.hazard_experimental, t);
    const double beta =
        std::log(rate_at(scenario.hazard_experimental, t) / rate_at(scenario.hazard_control, t));
    return beta * 0.5 * (fc + fe);
  };

  const double mass =
      1.0 - 0.5 * (survival(scenario.hazard_control, tau) +
                   survival(scenario.hazard_experimental, tau));
  if (!(mass > 0))
    fail(errc::invalid_scenario, "true_average_effect: no failure mass before the cutoff");

  // Integrate piecewise between hazard breakpoints; beta(t) jumps there.
  std::vector<double> cuts = {0.0, tau};
  for (const auto& p : scenario.hazard_control)
    if (p.start > 0 && p.start < tau) cuts.push_back(p.start);
  for (const auto& p : scenario.hazard_experimental)
    if (p.start > 0 && p.start < tau) cuts.push_back(p.start);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    integral += adaptive_simpson(integrand, cuts[i], cuts[i + 1], 1e-9);
  return integral / mass;
}

namespace {

// The all-composite derivation spec for a scenario: every generated kind
// terminates the observation as an event.
EstimandSpec experiment_spec(const Scenario& scenario) {
  std::string text = "name = experiment_all_composite\n\n[population]\n";
  text += "\n[variable]\norigin = randomisation\nendpoint_events = " +
          scenario.endpoint_kind + "\n";
  if (scenario.dropout_rate > 0) text += "\n[intercurrent.dropout]\nstrategy = composite\n";
  for (const auto& [kind, rates] : scenario.intercurrent)
    text += "\n[intercurrent." + kind + "]\nstrategy = composite\n";
  text += "\n[summary]\nmeasure = cox_hr\ngatekeeper = logrank\n";
  return parse_spec(text);
}

std::vector<ArmRecord> to_arm_records(const DerivedDataset& ds) {
  std::vector<ArmRecord> out;
  out.reserve(ds.observations.size());
  for (const auto& o : ds.observations)
    out.push_back({o.time, o.status.kind == StatusKind::event,
                   o.arm == arms::experimental, ""});
  return out;
}

}  // namespace

ExperimentReport censoring_dependence_experiment(const Scenario& scenario,
                                                 const std::vector<double>& regimes,
                                                 int replicates, std::uint64_t seed,
                                                 unsigned threads) {
  scenario.validate();
  if (regimes.size() < 2)
    fail(errc::too_few_regimes, "censoring_dependence_experiment: need at least 2 regimes");
  for (double r : regimes)
    if (!(r > 0)) fail(errc::invalid_scenario, "regime cutoffs must be positive");
  if (replicates < 1)
    fail(errc::invalid_scenario, "censoring_dependence_experiment: replicates must be >= 1");

  const double max_cutoff = *std::max_element(regimes.begin(), regimes.end());
  const EstimandSpec spec = experiment_spec(scenario);

  const std::size_t n_regimes = regimes.size();
  std::vector<double> cox(static_cast<std::size_t>(replicates) * n_regimes, 0.0);
  std::vector<double> xoq(cox.size(), 0.0);

  parallel_for(static_cast<std::size_t>(replicates), threads, [&](std::size_t rep) {
    Scenario local = scenario;
    local.cutoff = max_cutoff;
    local.seed = derive_seed(seed, rep);
    Cohort cohort = simulate_cohort(local);
    for (std::size_t g = 0; g < n_regimes; ++g) {
      Cohort cut = cohort;
      cut.cutoff_calendar_time = regimes[g];
      const DerivedDataset ds = derive_dataset(spec, cut);
      const std::vector<ArmRecord> records = to_arm_records(ds);
      cox[rep * n_regimes + g] = cox_fit(records).beta_hat;
      AvgEffectOptions opts;
      opts.bootstrap_resamples = 0;  // point estimates only
      xoq[rep * n_regimes + g] = avg_regression_effect(records, opts).beta_bar;
    }
  });

  ExperimentReport report;
  report.replicates = replicates;
  report.n_per_arm = scenario.n_per_arm;
  report.seed = seed;
  for (std::size_t g = 0; g < n_regimes; ++g) {
    RegimeStats st;
    st.cutoff = regimes[g];
    double sum_c = 0, sum_x = 0;
    for (int rep = 0; rep < replicates; ++rep) {
      sum_c += cox[static_cast<std::size_t>(rep) * n_regimes + g];
      sum_x += xoq[static_cast<std::size_t>(rep) * n_regimes + g];
    }
    st.mean_cox = sum_c / replicates;
    st.mean_xoq = sum_x / replicates;
    double ss_c = 0, ss_x = 0;
    for (int rep = 0; rep < replicates; ++rep) {
      const double dc = cox[static_cast<std::size_t>(rep) * n_regimes + g] - st.mean_cox;
      const double dx = xoq[static_cast<std::size_t>(rep) * n_regimes + g] - st.mean_xoq;
      ss_c += dc * dc;
      ss_x += dx * dx;
    }
    st.sd_cox = replicates > 1 ? std::sqrt(ss_c / (replicates - 1)) : 0.0;
    st.sd_xoq = replicates > 1 ? std::sqrt(ss_x / (replicates - 1)) : 0.0;
    st.true_beta_bar = true_average_effect(scenario, regimes[g]);
    report.regimes.push_back(st);
  }

  auto spread = [](const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
  };
  std::vector<double> mc, mx, rc, rx;
  for (const auto& st : report.regimes) {
    mc.push_back(st.mean_cox);
    mx.push_back(st.mean_xoq);
    rc.push_back(st.mean_cox - st.true_beta_bar);
    rx.push_back(st.mean_xoq - st.true_beta_bar);
  }
  report.cox_drift = spread(mc);
  report.xoq_drift = spread(mx);
  report.cox_excess_drift = spread(rc);
  report.xoq_excess_drift = spread(rx);
  return report;
}

}  // namespace tte
