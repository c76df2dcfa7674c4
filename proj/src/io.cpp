#include "tte/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tte/competing.hpp"
#include "tte/config.hpp"
#include "tte/cox.hpp"
#include "tte/error.hpp"
#include "tte/logrank.hpp"
#include "tte/numeric.hpp"
#include "tte/survival.hpp"
#include "tte/version.hpp"

namespace tte {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write '" + path + "'");
  out << content;
  if (!out) fail(errc::io_error, "failed writing '" + path + "'");
}

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> line_numbers;

  int column(const std::string& name, const std::string& path) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return static_cast<int>(i);
    fail(errc::parse_error, path + ": missing column '" + name + "'");
  }
};

Table read_csv(const std::string& path) {
  const std::string text = read_file(path);
  Table table;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line, ',');
    for (auto& f : fields) f = trim(f);
    if (table.header.empty()) {
      table.header = std::move(fields);
    } else {
      if (fields.size() != table.header.size())
        fail(errc::parse_error, path + " line " + std::to_string(lineno) + ": expected " +
                                    std::to_string(table.header.size()) + " fields, got " +
                                    std::to_string(fields.size()));
      table.rows.push_back(std::move(fields));
      table.line_numbers.push_back(lineno);
    }
  }
  if (table.header.empty()) fail(errc::parse_error, path + ": empty file");
  return table;
}

double number_at(const Table& t, std::size_t row, int col, const std::string& path) {
  const std::string& text = t.rows[row][static_cast<std::size_t>(col)];
  char* end = nullptr;
  const std::string trimmed = trim(text);
  double v = std::strtod(trimmed.c_str(), &end);
  if (trimmed.empty() || end != trimmed.c_str() + trimmed.size())
    fail(errc::parse_error, path + " line " + std::to_string(t.line_numbers[row]) +
                                ": expected a number, got '" + text + "'");
  return v;
}

}  // namespace

Cohort load_cohort(const std::string& subjects_path, const std::string& events_path,
                   std::optional<double> cutoff_override) {
  const Table subjects = read_csv(subjects_path);
  const Table events = read_csv(events_path);

  const int col_id = subjects.column("subject_id", subjects_path);
  const int col_arm = subjects.column("arm", subjects_path);
  const int col_entry = subjects.column("entry_calendar_time", subjects_path);
  std::vector<std::pair<int, std::string>> strata_cols, cov_cols;
  for (std::size_t i = 0; i < subjects.header.size(); ++i) {
    const std::string& h = subjects.header[i];
    if (h.rfind("stratum.", 0) == 0) strata_cols.emplace_back(static_cast<int>(i), h.substr(8));
    if (h.rfind("cov.", 0) == 0) cov_cols.emplace_back(static_cast<int>(i), h.substr(4));
  }

  Cohort cohort;
  std::map<std::string, std::size_t> index;
  for (std::size_t r = 0; r < subjects.rows.size(); ++r) {
    SubjectTimeline s;
    s.subject_id = subjects.rows[r][static_cast<std::size_t>(col_id)];
    s.arm = subjects.rows[r][static_cast<std::size_t>(col_arm)];
    s.entry_calendar_time = number_at(subjects, r, col_entry, subjects_path);
    for (const auto& [col, name] : strata_cols)
      s.strata[name] = subjects.rows[r][static_cast<std::size_t>(col)];
    for (const auto& [col, name] : cov_cols)
      s.covariates[name] = number_at(subjects, r, col, subjects_path);
    index[s.subject_id] = cohort.subjects.size();
    cohort.subjects.push_back(std::move(s));
  }

  const int ev_id = events.column("subject_id", events_path);
  const int ev_kind = events.column("kind", events_path);
  const int ev_time = events.column("time", events_path);
  for (std::size_t r = 0; r < events.rows.size(); ++r) {
    const std::string& id = events.rows[r][static_cast<std::size_t>(ev_id)];
    auto it = index.find(id);
    if (it == index.end())
      fail(errc::unknown_subject_in_events,
           events_path + " line " + std::to_string(events.line_numbers[r]) +
               ": subject '" + id + "' not in the subjects table");
    cohort.subjects[it->second].events.push_back(
        {events.rows[r][static_cast<std::size_t>(ev_kind)], number_at(events, r, ev_time, events_path)});
  }

  // Default clinical cutoff: everything recorded is observed. The CLI can
  // override to re-analyze the same files at an earlier cutoff.
  double cutoff = 0.0;
  for (const auto& s : cohort.subjects) {
    double last = s.entry_calendar_time;
    for (const auto& e : s.events) last = std::max(last, s.entry_calendar_time + e.time);
    cutoff = std::max(cutoff, last);
  }
  cohort.cutoff_calendar_time = cutoff_override.value_or(cutoff);

  return validate_cohort(std::move(cohort));
}

namespace {

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

}  // namespace

void write_cohort(const Cohort& cohort, const std::string& subjects_path,
                  const std::string& events_path) {
  std::set<std::string> strata_names, cov_names;
  for (const auto& s : cohort.subjects) {
    for (const auto& [k, v] : s.strata) strata_names.insert(k);
    for (const auto& [k, v] : s.covariates) cov_names.insert(k);
  }
  std::string subjects = "subject_id,arm,entry_calendar_time";
  for (const auto& k : strata_names) subjects += ",stratum." + k;
  for (const auto& k : cov_names) subjects += ",cov." + k;
  subjects += "\n";
  std::string events = "subject_id,kind,time\n";
  for (const auto& s : cohort.subjects) {
    subjects += s.subject_id + "," + s.arm + "," + format_number(s.entry_calendar_time);
    for (const auto& k : strata_names) {
      auto it = s.strata.find(k);
      subjects += "," + (it == s.strata.end() ? std::string{} : it->second);
    }
    for (const auto& k : cov_names) {
      auto it = s.covariates.find(k);
      subjects += "," + (it == s.covariates.end() ? std::string{} : format_number(it->second));
    }
    subjects += "\n";
    for (const auto& e : s.events)
      events += s.subject_id + "," + e.kind + "," + format_number(e.time) + "\n";
  }
  write_file(subjects_path, subjects);
  write_file(events_path, events);
}

void write_derived_csv(const DerivedDataset& ds, const std::string& path) {
  std::set<std::string> strata_names;
  for (const auto& o : ds.observations)
    for (const auto& [k, v] : o.strata) strata_names.insert(k);
  std::string out = "subject_id,arm,time,status,cause";
  for (const auto& k : strata_names) out += ",stratum." + k;
  out += "\n";
  for (const auto& o : ds.observations) {
    const char* status = o.status.kind == StatusKind::event      ? "event"
                         : o.status.kind == StatusKind::censored ? "censored"
                                                                 : "competing";
    out += o.subject_id + "," + o.arm + "," + format_number(o.time) + "," + status + "," +
           o.status.cause;
    for (const auto& k : strata_names) {
      auto it = o.strata.find(k);
      out += "," + (it == o.strata.end() ? std::string{} : it->second);
    }
    out += "\n";
  }
  write_file(path, out);
}

DerivedDataset load_derived_csv(const std::string& path) {
  const Table t = read_csv(path);
  const int col_id = t.column("subject_id", path);
  const int col_arm = t.column("arm", path);
  const int col_time = t.column("time", path);
  const int col_status = t.column("status", path);
  const int col_cause = t.column("cause", path);
  std::vector<std::pair<int, std::string>> strata_cols;
  for (std::size_t i = 0; i < t.header.size(); ++i)
    if (t.header[i].rfind("stratum.", 0) == 0)
      strata_cols.emplace_back(static_cast<int>(i), t.header[i].substr(8));

  DerivedDataset ds;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    DerivedObservation o;
    o.subject_id = t.rows[r][static_cast<std::size_t>(col_id)];
    o.arm = t.rows[r][static_cast<std::size_t>(col_arm)];
    o.time = number_at(t, r, col_time, path);
    const std::string& status = t.rows[r][static_cast<std::size_t>(col_status)];
    if (status == "event")
      o.status = {StatusKind::event, ""};
    else if (status == "censored")
      o.status = {StatusKind::censored, ""};
    else if (status == "competing")
      o.status = {StatusKind::competing, t.rows[r][static_cast<std::size_t>(col_cause)]};
    else
      fail(errc::parse_error, path + " line " + std::to_string(t.line_numbers[r]) +
                                  ": unknown status '" + status + "'");
    for (const auto& [col, name] : strata_cols)
      o.strata[name] = t.rows[r][static_cast<std::size_t>(col)];
    ds.observations.push_back(std::move(o));
  }
  return ds;
}

Json derivation_audit(const EstimandSpec& spec, const DerivedDataset& ds) {
  Json audit = Json::object();
  audit["spec_name"] = spec.name;
  audit["n_excluded_by_population"] = ds.n_excluded_by_population;
  audit["n_excluded_no_origin"] = ds.n_excluded_no_origin;
  Json subjects = Json::array();
  for (const auto& o : ds.observations) {
    Json s = Json::object();
    s["subject_id"] = o.subject_id;
    s["arm"] = o.arm;
    s["time"] = o.time;
    s["status"] = o.status.kind == StatusKind::event      ? "event"
                  : o.status.kind == StatusKind::censored ? "censored"
                                                          : "competing";
    if (o.status.kind == StatusKind::competing) s["cause"] = o.status.cause;
    Json log = Json::array();
    for (const auto& entry : o.derivation_log) {
      Json e = Json::object();
      if (!entry.event_kind.empty()) e["event_kind"] = entry.event_kind;
      e["strategy"] = entry.strategy;
      e["action"] = entry.action;
      e["time"] = entry.time;
      log.push_back(std::move(e));
    }
    s["derivation_log"] = std::move(log);
    subjects.push_back(std::move(s));
  }
  audit["observations"] = std::move(subjects);
  return audit;
}

namespace {

std::string joint_stratum(const std::map<std::string, std::string>& strata) {
  std::string out;
  for (const auto& [k, v] : strata) {
    if (!out.empty()) out += "|";
    out += k + "=" + v;
  }
  return out;
}

std::vector<ArmRecord> observation_records(const std::vector<DerivedObservation>& obs) {
  std::vector<ArmRecord> out;
  out.reserve(obs.size());
  for (const auto& o : obs) {
    if (o.arm != arms::experimental && o.arm != arms::control)
      fail(errc::empty_arm_label,
           "subject '" + o.subject_id + "': arm '" + o.arm +
               "' (two-arm analyses need 'control'/'experimental')");
    // Competing events are censored for endpoint-cause inference.
    out.push_back({o.time, o.status.kind == StatusKind::event, o.arm == arms::experimental,
                   joint_stratum(o.strata)});
  }
  return out;
}

Json effect_json(const EffectEstimate& e, double level) {
  Json j = Json::object();
  j["value"] = e.value;
  j["ci_low"] = e.ci_low;
  j["ci_high"] = e.ci_high;
  j["level"] = level;
  j["scale"] = contrast_scale_name(e.scale);
  j["method"] = e.method;
  return j;
}

Json test_json(const TestResult& t) {
  Json j = Json::object();
  j["method"] = t.method;
  j["statistic"] = t.statistic;
  j["p_value"] = t.p_value;
  j["n_events_experimental"] = t.n_events_experimental;
  j["n_events_control"] = t.n_events_control;
  j["observed_minus_expected"] = t.observed_minus_expected;
  if (t.permutations > 0) j["permutations"] = t.permutations;
  return j;
}

Json curve_json(const SurvivalCurve& c) {
  Json j = Json::object();
  j["times"] = Json::array_of(c.times.begin(), c.times.end());
  j["survival"] = Json::array_of(c.estimates.begin(), c.estimates.end());
  j["greenwood_var"] = Json::array_of(c.greenwood_var.begin(), c.greenwood_var.end());
  j["at_risk"] = Json::array_of(c.at_risk.begin(), c.at_risk.end());
  j["n_events"] = Json::array_of(c.n_events.begin(), c.n_events.end());
  j["n_total"] = c.n_total;
  j["max_follow_up"] = c.max_follow_up;
  return j;
}

std::uint64_t require_seed(const AnalysisOptions& opts, const std::string& why) {
  if (!opts.seed)
    fail(errc::missing_attribute, why + " requires an explicit seed (--seed)");
  return *opts.seed;
}

std::string fmt_ph_note(double cox_beta, double avg_beta) {
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "proportional-hazards diagnostic: unstratified Cox log HR %.4f vs average "
                "regression effect %.4f; under non-proportional hazards the hazard-ratio "
                "estimand depends on the censoring pattern",
                cox_beta, avg_beta);
  return buf;
}

}  // namespace

Json run_analysis_derived(const EstimandSpec& spec, const DerivedDataset& ds,
                          const AnalysisOptions& opts) {
  Json report = Json::object();
  Json tool = Json::object();
  tool["name"] = version::name;
  tool["version"] = version::string;
  report["tool"] = std::move(tool);

  Json inputs = Json::object();
  for (const auto& [key, digest] : opts.input_digests) inputs[key + "_digest"] = digest;
  if (opts.cutoff) inputs["cutoff"] = *opts.cutoff;
  if (opts.seed) inputs["seed"] = *opts.seed;
  report["inputs"] = std::move(inputs);

  Json spec_echo = Json::object();
  spec_echo["name"] = spec.name;
  if (!spec.variable.empty()) spec_echo["variable"] = spec.variable;
  spec_echo["config"] = emit_spec(spec);
  report["spec"] = std::move(spec_echo);

  std::vector<std::string> warnings;

  // Derivation summary.
  int n_event = 0, n_censored = 0, n_competing = 0;
  std::set<std::string> causes;
  for (const auto& o : ds.observations) {
    switch (o.status.kind) {
      case StatusKind::event: ++n_event; break;
      case StatusKind::censored: ++n_censored; break;
      case StatusKind::competing:
        ++n_competing;
        causes.insert(o.status.cause);
        break;
    }
  }
  Json derivation = Json::object();
  derivation["n_included"] = static_cast<int>(ds.observations.size());
  derivation["n_excluded_by_population"] = ds.n_excluded_by_population;
  derivation["n_excluded_no_origin"] = ds.n_excluded_no_origin;
  derivation["n_events"] = n_event;
  derivation["n_censored"] = n_censored;
  derivation["n_competing"] = n_competing;
  report["derivation"] = std::move(derivation);

  if (n_event == 0)
    fail(errc::no_events, "spec '" + spec.name + "': derivation produced zero events");

  const std::vector<ArmRecord> records = observation_records(ds.observations);
  std::vector<TimeEvent> exp_data, ctrl_data;
  for (const auto& r : records)
    (r.experimental ? exp_data : ctrl_data).push_back({r.time, r.is_event});

  // Gatekeeper stage.
  const SummaryMeasure& summary = spec.summary;
  if (summary.gatekeeper != GatekeeperKind::none) {
    TestResult gate;
    switch (summary.gatekeeper) {
      case GatekeeperKind::logrank: gate = logrank(records, false); break;
      case GatekeeperKind::stratified_logrank: gate = logrank(records, true); break;
      case GatekeeperKind::rerandomization:
        gate = rerandomization_test(records, opts.permutations,
                                    require_seed(opts, "the re-randomization test"),
                                    summary.stratified, opts.threads);
        break;
      case GatekeeperKind::none: break;
    }
    report["gatekeeper"] = test_json(gate);
  }

  // Effect stage.
  Json effects = Json::array();
  const bool is_test_measure = summary.measure == MeasureKind::logrank ||
                               summary.measure == MeasureKind::stratified_logrank;
  if (is_test_measure) {
    report["summary_test"] =
        test_json(logrank(records, summary.measure == MeasureKind::stratified_logrank));
  } else if (summary.measure == MeasureKind::cox_hr) {
    const CoxFit fit = cox_fit(records, TiesMethod::breslow, summary.stratified);
    Json fitj = Json::object();
    fitj["score_chi2"] = fit.score_chi2;
    fitj["score_p_value"] = chisq1_sf(fit.score_chi2);
    fitj["iterations"] = fit.iterations;
    fitj["converged"] = fit.converged;
    fitj["monotone_likelihood"] = fit.monotone_likelihood;
    fitj["n_events"] = fit.n_events;
    fitj["n_strata"] = fit.n_strata;
    fitj["ties"] = fit.ties == TiesMethod::breslow ? "breslow" : "efron";
    report["cox_fit"] = std::move(fitj);
    if (fit.monotone_likelihood) {
      warnings.push_back(
          "monotone partial likelihood: the hazard ratio diverges and no finite "
          "estimate is reported");
    } else {
      const double z = normal_quantile(1 - (1 - opts.level) / 2);
      EffectEstimate log_hr;
      log_hr.value = fit.beta_hat;
      log_hr.ci_low = fit.beta_hat - z * fit.se;
      log_hr.ci_high = fit.beta_hat + z * fit.se;
      log_hr.scale = ContrastScale::log_hazard_ratio;
      log_hr.method = summary.stratified ? "cox_breslow_stratified" : "cox_breslow";
      effects.push_back(effect_json(log_hr, opts.level));
      EffectEstimate hr;
      hr.value = std::exp(log_hr.value);
      hr.ci_low = std::exp(log_hr.ci_low);
      hr.ci_high = std::exp(log_hr.ci_high);
      hr.scale = ContrastScale::ratio;
      hr.method = log_hr.method;
      effects.push_back(effect_json(hr, opts.level));
      if (!fit.converged) warnings.push_back("Cox fit did not converge");

      // PH diagnostic: under proportional hazards the average regression
      // effect and the Cox estimate coincide; a large gap flags that the
      // hazard-ratio estimand may depend on the censoring pattern.
      AvgEffectOptions diag;
      diag.bootstrap_resamples = 0;
      const AvgEffectEstimate avg = avg_regression_effect(records, diag);
      if (!avg.monotone_likelihood) {
        const CoxFit plain =
            summary.stratified ? cox_fit(records, TiesMethod::breslow, false) : fit;
        if (std::fabs(avg.beta_bar - plain.beta_hat) > 0.1)
          warnings.push_back(fmt_ph_note(plain.beta_hat, avg.beta_bar));
      }
    }
  } else if (summary.measure == MeasureKind::avg_regression_effect) {
    AvgEffectOptions xopts;
    xopts.bootstrap_resamples =
        opts.bootstrap_resamples > 0 ? opts.bootstrap_resamples : 1000;
    xopts.seed = require_seed(opts, "the average-regression-effect bootstrap");
    xopts.level = opts.level;
    xopts.threads = opts.threads;
    const AvgEffectEstimate est = avg_regression_effect(records, xopts);
    if (est.monotone_likelihood) {
      warnings.push_back(
          "monotone weighted partial likelihood: no finite average-effect estimate");
    } else {
      EffectEstimate e;
      e.value = est.beta_bar;
      e.ci_low = est.ci_low;
      e.ci_high = est.ci_high;
      e.scale = ContrastScale::log_hazard_ratio;
      e.method = "avg_regression_effect";
      effects.push_back(effect_json(e, opts.level));
      Json weights = Json::object();
      weights["min"] = est.weight_min;
      weights["max"] = est.weight_max;
      weights["mean"] = est.weight_mean;
      weights["bootstrap_used"] = est.bootstrap_used;
      report["xoq_weights"] = std::move(weights);
    }
  } else {
    ContrastMeasure cm = ContrastMeasure::milestone;
    if (summary.measure == MeasureKind::quantile_diff) cm = ContrastMeasure::quantile;
    if (summary.measure == MeasureKind::rmst_diff) cm = ContrastMeasure::rmst;
    ContrastOptions copts;
    copts.level = opts.level;
    if (cm == ContrastMeasure::quantile) {
      copts.bootstrap_resamples =
          opts.bootstrap_resamples > 0 ? opts.bootstrap_resamples : 2000;
      copts.seed = require_seed(opts, "the quantile-difference bootstrap");
    }
    effects.push_back(
        effect_json(contrast(exp_data, ctrl_data, cm, summary.param, summary.scale, copts),
                    opts.level));
    if (summary.gatekeeper != GatekeeperKind::none)
      warnings.push_back(
          "gatekeeper test and effect quantifier target different summary measures");
  }
  if (summary.measure == MeasureKind::avg_regression_effect &&
      summary.gatekeeper != GatekeeperKind::none)
    warnings.push_back(
        "gatekeeper test and effect quantifier target different summary measures");
  report["effects"] = std::move(effects);

  // Kaplan-Meier coordinates per arm (competing statuses censored here; the
  // cause-level picture is in "incidence").
  Json curves = Json::object();
  curves["experimental"] = curve_json(kaplan_meier(exp_data));
  curves["control"] = curve_json(kaplan_meier(ctrl_data));
  report["curves"] = std::move(curves);

  if (n_competing > 0) {
    warnings.push_back(
        "while-on-treatment strategy present: endpoint inference is cause-specific; "
        "see the incidence section for probability statements");
    Json incidence = Json::object();
    for (int arm = 0; arm < 2; ++arm) {
      std::vector<CauseRecord> cause_data;
      for (const auto& o : ds.observations) {
        if ((o.arm == arms::experimental) != (arm == 1)) continue;
        CauseRecord cr;
        cr.time = o.time;
        if (o.status.kind == StatusKind::event) {
          cr.failed = true;
          cr.cause = "endpoint";
        } else if (o.status.kind == StatusKind::competing) {
          cr.failed = true;
          cr.cause = o.status.cause;
        }
        cause_data.push_back(std::move(cr));
      }
      Json arm_json = Json::array();
      for (const auto& cif : aalen_johansen(cause_data)) {
        Json c = Json::object();
        c["cause"] = cif.cause;
        c["times"] = Json::array_of(cif.times.begin(), cif.times.end());
        c["cif"] = Json::array_of(cif.cif.begin(), cif.cif.end());
        c["variance"] = Json::array_of(cif.variance.begin(), cif.variance.end());
        arm_json.push_back(std::move(c));
      }
      incidence[arm == 1 ? "experimental" : "control"] = std::move(arm_json);
    }
    report["incidence"] = std::move(incidence);
  }

  Json warn = Json::array();
  for (const auto& w : warnings) warn.push_back(w);
  report["warnings"] = std::move(warn);
  return report;
}

Json run_analysis(const EstimandSpec& spec, const Cohort& cohort,
                  const AnalysisOptions& opts) {
  Cohort working = cohort;
  if (opts.cutoff) working.cutoff_calendar_time = *opts.cutoff;
  const DerivedDataset ds = derive_dataset(spec, working);
  return run_analysis_derived(spec, ds, opts);
}

int plan_events(double alpha_two_sided, double power, double hazard_ratio,
                double allocation_ratio) {
  if (!(alpha_two_sided > 0 && alpha_two_sided < 1))
    fail(errc::invalid_probability, "plan_events: alpha must be in (0,1)");
  if (!(power > 0 && power < 1))
    fail(errc::invalid_probability, "plan_events: power must be in (0,1)");
  if (!(hazard_ratio > 0) || !std::isfinite(hazard_ratio))
    fail(errc::invalid_probability, "plan_events: hazard ratio must be positive and finite");
  if (hazard_ratio == 1.0)
    fail(errc::hr_equals_one, "plan_events: a hazard ratio of 1 cannot be powered");
  if (!(allocation_ratio > 0) || !std::isfinite(allocation_ratio))
    fail(errc::invalid_probability, "plan_events: allocation ratio must be positive");

  const double p = allocation_ratio / (1.0 + allocation_ratio);
  const double z = normal_quantile(1 - alpha_two_sided / 2) + normal_quantile(power);
  const double log_hr = std::log(hazard_ratio);
  return static_cast<int>(std::ceil(z * z / (p * (1 - p) * log_hr * log_hr)));
}

Json experiment_report_json(const ExperimentReport& report) {
  Json j = Json::object();
  Json tool = Json::object();
  tool["name"] = version::name;
  tool["version"] = version::string;
  j["tool"] = std::move(tool);
  j["replicates"] = report.replicates;
  j["n_per_arm"] = report.n_per_arm;
  j["seed"] = report.seed;
  Json regimes = Json::array();
  for (const auto& r : report.regimes) {
    Json rj = Json::object();
    rj["cutoff"] = r.cutoff;
    rj["mean_cox_beta"] = r.mean_cox;
    rj["sd_cox_beta"] = r.sd_cox;
    rj["mean_avg_effect"] = r.mean_xoq;
    rj["sd_avg_effect"] = r.sd_xoq;
    rj["true_avg_effect"] = r.true_beta_bar;
    regimes.push_back(std::move(rj));
  }
  j["regimes"] = std::move(regimes);
  Json drift = Json::object();
  drift["cox"] = report.cox_drift;
  drift["avg_effect"] = report.xoq_drift;
  drift["cox_excess"] = report.cox_excess_drift;
  drift["avg_effect_excess"] = report.xoq_excess_drift;
  j["drift"] = std::move(drift);
  return j;
}

}  // namespace tte
