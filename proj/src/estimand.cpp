#include "tte/estimand.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "tte/config.hpp"
#include "tte/error.hpp"

namespace tte {

const char* strategy_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::treatment_policy: return "treatment_policy";
    case StrategyKind::composite: return "composite";
    case StrategyKind::hypothetical: return "hypothetical";
    case StrategyKind::while_on_treatment: return "while_on_treatment";
    case StrategyKind::principal_stratum: return "principal_stratum";
  }
  return "?";
}

StrategyKind parse_strategy(const std::string& name) {
  if (name == "treatment_policy") return StrategyKind::treatment_policy;
  if (name == "composite") return StrategyKind::composite;
  if (name == "hypothetical") return StrategyKind::hypothetical;
  if (name == "while_on_treatment") return StrategyKind::while_on_treatment;
  if (name == "principal_stratum") return StrategyKind::principal_stratum;
  fail(errc::unknown_strategy, "unknown strategy '" + name + "'");
}

const Strategy& IntercurrentRule::for_arm(const std::string& arm) const {
  auto it = arm_override.find(arm);
  return it == arm_override.end() ? base : it->second;
}

bool FilterClause::matches(const SubjectTimeline& subject) const {
  switch (field) {
    case Field::arm:
      return subject.arm == eq_value;
    case Field::stratum: {
      auto it = subject.strata.find(name);
      return it != subject.strata.end() && it->second == eq_value;
    }
    case Field::covariate: {
      auto it = subject.covariates.find(name);
      if (it == subject.covariates.end()) return false;
      if (min && it->second < *min) return false;
      if (max && it->second > *max) return false;
      return true;
    }
  }
  return false;
}

const char* measure_name(MeasureKind m) {
  switch (m) {
    case MeasureKind::logrank: return "logrank";
    case MeasureKind::stratified_logrank: return "stratified_logrank";
    case MeasureKind::cox_hr: return "cox_hr";
    case MeasureKind::avg_regression_effect: return "avg_regression_effect";
    case MeasureKind::milestone: return "milestone";
    case MeasureKind::quantile_diff: return "quantile_diff";
    case MeasureKind::rmst_diff: return "rmst_diff";
  }
  return "?";
}

const char* gatekeeper_name(GatekeeperKind g) {
  switch (g) {
    case GatekeeperKind::none: return "none";
    case GatekeeperKind::logrank: return "logrank";
    case GatekeeperKind::stratified_logrank: return "stratified_logrank";
    case GatekeeperKind::rerandomization: return "rerandomization";
  }
  return "?";
}

std::set<std::string> EstimandSpec::effective_endpoints() const {
  std::set<std::string> out = endpoint_kinds;
  for (const auto& [kind, rule] : strategies) {
    bool composite = rule.base.kind == StrategyKind::composite;
    for (const auto& [arm, s] : rule.arm_override)
      composite = composite || s.kind == StrategyKind::composite;
    if (composite) out.insert(kind);
  }
  return out;
}

namespace {

MeasureKind parse_measure(const std::string& name) {
  if (name == "logrank") return MeasureKind::logrank;
  if (name == "stratified_logrank") return MeasureKind::stratified_logrank;
  if (name == "cox_hr") return MeasureKind::cox_hr;
  if (name == "avg_regression_effect") return MeasureKind::avg_regression_effect;
  if (name == "milestone") return MeasureKind::milestone;
  if (name == "quantile_diff") return MeasureKind::quantile_diff;
  if (name == "rmst_diff") return MeasureKind::rmst_diff;
  fail(errc::unknown_summary_measure, "unknown summary measure '" + name + "'");
}

GatekeeperKind parse_gatekeeper(const std::string& name) {
  if (name == "none") return GatekeeperKind::none;
  if (name == "logrank") return GatekeeperKind::logrank;
  if (name == "stratified_logrank") return GatekeeperKind::stratified_logrank;
  if (name == "rerandomization") return GatekeeperKind::rerandomization;
  fail(errc::unknown_summary_measure, "unknown gatekeeper test '" + name + "'");
}

ContrastScale parse_scale(const std::string& name) {
  if (name == "difference") return ContrastScale::difference;
  if (name == "ratio") return ContrastScale::ratio;
  if (name == "odds_ratio") return ContrastScale::odds_ratio;
  if (name == "log_hazard_ratio") return ContrastScale::log_hazard_ratio;
  fail(errc::unknown_summary_measure, "unknown contrast scale '" + name + "'");
}

void validate_spec(const EstimandSpec& spec) {
  for (const auto& kind : spec.endpoint_kinds)
    if (spec.strategies.count(kind))
      fail(errc::overlap_endpoint_intercurrent,
           "event kind '" + kind + "' is both endpoint-defining and intercurrent");
  if (spec.effective_endpoints().empty())
    fail(errc::missing_attribute,
         "spec '" + spec.name + "' defines no endpoint events (directly or via composite)");
  for (const auto& [kind, rule] : spec.strategies) {
    auto check = [&kind](const Strategy& s) {
      if (s.kind == StrategyKind::while_on_treatment && s.cause.empty())
        fail(errc::missing_attribute,
             "while_on_treatment for '" + kind + "' needs a competing-cause label");
    };
    check(rule.base);
    for (const auto& [arm, s] : rule.arm_override) check(s);
  }
  switch (spec.summary.measure) {
    case MeasureKind::milestone:
      if (!(spec.summary.param > 0))
        fail(errc::missing_attribute, "milestone summary needs t0 > 0");
      break;
    case MeasureKind::quantile_diff:
      if (!(spec.summary.param > 0 && spec.summary.param < 1))
        fail(errc::missing_attribute, "quantile_diff summary needs q in (0,1)");
      break;
    case MeasureKind::rmst_diff:
      if (!(spec.summary.param > 0))
        fail(errc::missing_attribute, "rmst_diff summary needs tau > 0");
      break;
    default:
      break;
  }
}

}  // namespace

EstimandSpec parse_spec(const std::string& text) {
  const ConfigDoc doc = ConfigDoc::parse(text);
  EstimandSpec spec;
  spec.name = doc.get("", "name").value_or("");
  if (spec.name.empty()) fail(errc::missing_attribute, "spec is missing 'name'");
  spec.variable = doc.get("", "variable").value_or("");
  spec.description = doc.get("", "description").value_or("");

  if (!doc.has_section("population"))
    fail(errc::missing_attribute, "spec is missing the [population] section");
  for (const auto& [key, value] : doc.entries("population")) {
    FilterClause clause;
    if (key == "arm") {
      clause.field = FilterClause::Field::arm;
      clause.eq_value = value;
    } else if (key.rfind("stratum.", 0) == 0) {
      clause.field = FilterClause::Field::stratum;
      clause.name = key.substr(8);
      clause.eq_value = value;
    } else if (key.rfind("cov.", 0) == 0) {
      std::string rest = key.substr(4);
      auto dot = rest.rfind('.');
      if (dot == std::string::npos || (rest.substr(dot + 1) != "min" && rest.substr(dot + 1) != "max"))
        fail(errc::parse_error, "population clause '" + key + "': use cov.<name>.min or cov.<name>.max");
      clause.field = FilterClause::Field::covariate;
      clause.name = rest.substr(0, dot);
      const double bound = parse_number(value, key);
      // Merge min/max bounds for the same covariate into one clause.
      bool merged = false;
      for (auto& existing : spec.population_filter) {
        if (existing.field == FilterClause::Field::covariate && existing.name == clause.name) {
          (rest.substr(dot + 1) == "min" ? existing.min : existing.max) = bound;
          merged = true;
          break;
        }
      }
      if (merged) continue;
      (rest.substr(dot + 1) == "min" ? clause.min : clause.max) = bound;
    } else {
      fail(errc::parse_error, "unknown population clause '" + key + "'");
    }
    spec.population_filter.push_back(std::move(clause));
  }

  if (!doc.has_section("variable"))
    fail(errc::missing_attribute, "spec is missing the [variable] section");
  const std::string origin = trim(doc.require("variable", "origin"));
  if (origin != "randomisation")
    for (const auto& k : split(origin, ','))
      if (!trim(k).empty()) spec.origin_kinds.push_back(trim(k));
  const std::string endpoints = doc.require("variable", "endpoint_events");
  for (const auto& k : split(endpoints, ','))
    if (!trim(k).empty()) spec.endpoint_kinds.insert(trim(k));
  spec.censor_at_last_assessment =
      doc.get_bool("variable", "censor_at_last_assessment", false);

  for (const auto& section : doc.sections_with_prefix("intercurrent")) {
    if (section == "intercurrent")
      fail(errc::parse_error, "use [intercurrent.<kind>] sections");
    const std::string kind = section.substr(std::string("intercurrent.").size());
    IntercurrentRule rule;
    rule.base.kind = parse_strategy(doc.require(section, "strategy"));
    if (auto cause = doc.get(section, "cause")) rule.base.cause = *cause;
    if (rule.base.kind == StrategyKind::while_on_treatment && rule.base.cause.empty())
      rule.base.cause = kind;
    if (auto gap = doc.get_number(section, "stale_censor_gap")) rule.stale_censor_gap = *gap;
    for (const auto& [key, value] : doc.entries(section)) {
      if (key.rfind("arm_override.", 0) == 0) {
        const std::string arm = key.substr(std::string("arm_override.").size());
        Strategy s;
        s.kind = parse_strategy(value);
        if (s.kind == StrategyKind::while_on_treatment) s.cause = rule.base.cause.empty() ? kind : rule.base.cause;
        rule.arm_override[arm] = s;
      } else if (key != "strategy" && key != "cause" && key != "stale_censor_gap") {
        fail(errc::parse_error, "unknown key '" + key + "' in [" + section + "]");
      }
    }
    spec.strategies[kind] = std::move(rule);
  }

  if (!doc.has_section("summary"))
    fail(errc::missing_attribute, "spec is missing the [summary] section");
  spec.summary.measure = parse_measure(trim(doc.require("summary", "measure")));
  spec.summary.stratified = doc.get_bool("summary", "stratified", false);
  if (auto g = doc.get("summary", "gatekeeper"))
    spec.summary.gatekeeper = parse_gatekeeper(trim(*g));
  if (auto s = doc.get("summary", "scale")) spec.summary.scale = parse_scale(trim(*s));
  if (auto t0 = doc.get_number("summary", "t0")) spec.summary.param = *t0;
  if (auto q = doc.get_number("summary", "q")) spec.summary.param = *q;
  if (auto tau = doc.get_number("summary", "tau")) spec.summary.param = *tau;

  validate_spec(spec);
  return spec;
}

EstimandSpec parse_spec_file(const std::string& path) {
  std::ostringstream buf;
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(errc::io_error, "cannot open '" + path + "'");
    buf << in.rdbuf();
  }
  return parse_spec(buf.str());
}

std::string emit_spec(const EstimandSpec& spec) {
  std::ostringstream out;
  out << "name = " << spec.name << "\n";
  if (!spec.variable.empty()) out << "variable = " << spec.variable << "\n";
  if (!spec.description.empty()) out << "description = " << spec.description << "\n";

  out << "\n[population]\n";
  for (const auto& c : spec.population_filter) {
    switch (c.field) {
      case FilterClause::Field::arm:
        out << "arm = " << c.eq_value << "\n";
        break;
      case FilterClause::Field::stratum:
        out << "stratum." << c.name << " = " << c.eq_value << "\n";
        break;
      case FilterClause::Field::covariate:
        if (c.min) out << "cov." << c.name << ".min = " << *c.min << "\n";
        if (c.max) out << "cov." << c.name << ".max = " << *c.max << "\n";
        break;
    }
  }

  out << "\n[variable]\n";
  out << "origin = ";
  if (spec.origin_kinds.empty()) {
    out << "randomisation";
  } else {
    for (std::size_t i = 0; i < spec.origin_kinds.size(); ++i)
      out << (i ? ", " : "") << spec.origin_kinds[i];
  }
  out << "\n";
  out << "endpoint_events = ";
  bool first = true;
  for (const auto& k : spec.endpoint_kinds) {
    out << (first ? "" : ", ") << k;
    first = false;
  }
  out << "\n";
  if (spec.censor_at_last_assessment) out << "censor_at_last_assessment = true\n";

  for (const auto& [kind, rule] : spec.strategies) {
    out << "\n[intercurrent." << kind << "]\n";
    out << "strategy = " << strategy_name(rule.base.kind) << "\n";
    if (rule.base.kind == StrategyKind::while_on_treatment && rule.base.cause != kind)
      out << "cause = " << rule.base.cause << "\n";
    for (const auto& [arm, s] : rule.arm_override)
      out << "arm_override." << arm << " = " << strategy_name(s.kind) << "\n";
    if (rule.stale_censor_gap) out << "stale_censor_gap = " << *rule.stale_censor_gap << "\n";
  }

  out << "\n[summary]\n";
  out << "measure = " << measure_name(spec.summary.measure) << "\n";
  switch (spec.summary.measure) {
    case MeasureKind::milestone: out << "t0 = " << spec.summary.param << "\n"; break;
    case MeasureKind::quantile_diff: out << "q = " << spec.summary.param << "\n"; break;
    case MeasureKind::rmst_diff: out << "tau = " << spec.summary.param << "\n"; break;
    default: break;
  }
  if (spec.summary.stratified) out << "stratified = true\n";
  if (spec.summary.gatekeeper != GatekeeperKind::none)
    out << "gatekeeper = " << gatekeeper_name(spec.summary.gatekeeper) << "\n";
  switch (spec.summary.measure) {
    case MeasureKind::milestone:
    case MeasureKind::quantile_diff:
    case MeasureKind::rmst_diff:
      out << "scale = " << contrast_scale_name(spec.summary.scale) << "\n";
      break;
    default:
      break;
  }
  return out.str();
}

namespace {

struct ScanDecision {
  int rank = 3;  // 0 event, 1 competing, 2 censored; 3 = none
  DerivedStatus status;
  DerivationLogEntry log;
};

}  // namespace

CompileResult compile_subject(const EstimandSpec& spec,
                              const SubjectTimeline& subject, double horizon) {
  if (!(horizon > 0))
    fail(errc::invalid_horizon,
         "subject '" + subject.subject_id + "': administrative horizon must be positive");

  DerivedObservation obs;
  obs.subject_id = subject.subject_id;
  obs.arm = subject.arm;
  obs.strata = subject.strata;

  // Origin.
  double origin_time = 0.0;
  if (!spec.origin_kinds.empty()) {
    const ClinicalEvent* origin_event = nullptr;
    for (const auto& e : subject.events) {
      if (std::find(spec.origin_kinds.begin(), spec.origin_kinds.end(), e.kind) !=
          spec.origin_kinds.end()) {
        origin_event = &e;
        break;
      }
    }
    if (!origin_event) return Excluded{"no_origin_event"};
    origin_time = origin_event->time;
    obs.derivation_log.push_back(
        {origin_event->kind, "origin", "time origin at first origin event", 0.0});
  }
  const double horizon_from_origin = horizon - origin_time;
  if (!(horizon_from_origin > 0)) return Excluded{"no_follow_up_after_origin"};

  // Administrative censoring time, measured from the origin.
  double admin_time = horizon_from_origin;
  bool admin_at_assessment = false;
  if (spec.censor_at_last_assessment) {
    for (const auto& e : subject.events)
      if (e.kind == kinds::response_assessment && e.time > origin_time && e.time <= horizon) {
        admin_time = e.time - origin_time;
        admin_at_assessment = true;
      }
  }

  // Scan events after the origin in time order, group-wise over tied times.
  double last_assessment_abs = origin_time;  // for stale_censor_gap rules
  bool has_assessment_ref = false;
  std::size_t i = 0;
  const auto& events = subject.events;
  while (i < events.size()) {
    if (events[i].time <= origin_time || events[i].time > horizon) {
      ++i;
      continue;
    }
    const double t_abs = events[i].time;
    const double t = t_abs - origin_time;
    ScanDecision best;
    std::size_t j = i;
    for (; j < events.size() && events[j].time == t_abs; ++j) {
      const auto& e = events[j];
      if (e.kind == kinds::response_assessment) {
        last_assessment_abs = e.time;
        has_assessment_ref = true;
      }
      ScanDecision d;
      auto rule_it = spec.strategies.find(e.kind);

      // Staleness rule: an event this far past the last assessment censors
      // the subject at that assessment rather than counting.
      if (rule_it != spec.strategies.end() && rule_it->second.stale_censor_gap &&
          has_assessment_ref &&
          t_abs - last_assessment_abs >= *rule_it->second.stale_censor_gap) {
        d.rank = 2;
        d.status = {StatusKind::censored, ""};
        d.log = {e.kind, "stale_censor", "censored at last response assessment",
                 last_assessment_abs - origin_time};
        if (d.rank < best.rank) best = d;
        continue;
      }

      if (spec.endpoint_kinds.count(e.kind)) {
        d.rank = 0;
        d.status = {StatusKind::event, ""};
        d.log = {e.kind, "endpoint", "event", t};
        if (d.rank < best.rank) best = d;
        continue;
      }

      if (rule_it != spec.strategies.end()) {
        // Composite resolves per arm here (arm_override may differ).
        const Strategy& s = rule_it->second.for_arm(subject.arm);
        switch (s.kind) {
          case StrategyKind::treatment_policy:
            obs.derivation_log.push_back({e.kind, "treatment_policy", "skipped", t});
            break;
          case StrategyKind::composite:
            d.rank = 0;
            d.status = {StatusKind::event, ""};
            d.log = {e.kind, "composite", "event", t};
            break;
          case StrategyKind::hypothetical:
            d.rank = 2;
            d.status = {StatusKind::censored, ""};
            d.log = {e.kind, "hypothetical", "censored", t};
            break;
          case StrategyKind::while_on_treatment:
            d.rank = 1;
            d.status = {StatusKind::competing, s.cause};
            d.log = {e.kind, "while_on_treatment", "competing (" + s.cause + ")", t};
            break;
          case StrategyKind::principal_stratum:
            fail(errc::principal_stratum_unsupported,
                 "subject '" + subject.subject_id + "', kind '" + e.kind +
                     "': principal_stratum estimands are representable but not estimable"
                     " from this data model");
        }
        if (d.rank < best.rank) best = d;
        continue;
      }

      if (std::find(spec.origin_kinds.begin(), spec.origin_kinds.end(), e.kind) !=
          spec.origin_kinds.end()) {
        obs.derivation_log.push_back({e.kind, "origin_kind", "skipped (repeat origin event)", t});
        continue;
      }
      if (e.kind == kinds::response_assessment && spec.censor_at_last_assessment) {
        obs.derivation_log.push_back({e.kind, "assessment", "assessment recorded", t});
        continue;
      }
      fail(errc::undeclared_event_kind,
           "subject '" + subject.subject_id + "': event kind '" + e.kind +
               "' is neither endpoint-defining nor declared intercurrent in spec '" +
               spec.name + "'");
    }
    if (best.rank < 3) {
      // Censoring decisions that point at an earlier time (stale rule) keep
      // that earlier time.
      obs.time = best.log.strategy == "stale_censor" ? best.log.time : t;
      obs.status = best.status;
      obs.derivation_log.push_back(best.log);
      return obs;
    }
    i = j;
  }

  obs.time = admin_time;
  obs.status = {StatusKind::censored, ""};
  obs.derivation_log.push_back({"", "administrative",
                                admin_at_assessment
                                    ? "censored at last response assessment"
                                    : "censored at clinical cutoff",
                                admin_time});
  return obs;
}

DerivedDataset derive_dataset(const EstimandSpec& spec, const Cohort& cohort) {
  DerivedDataset ds;
  ds.spec_name = spec.name;
  for (const auto& raw : cohort.subjects) {
    bool included = true;
    for (const auto& clause : spec.population_filter)
      if (!clause.matches(raw)) {
        included = false;
        break;
      }
    if (!included) {
      ++ds.n_excluded_by_population;
      continue;
    }
    const SubjectTimeline subject = apply_clinical_cutoff(raw, cohort.cutoff_calendar_time);
    CompileResult res = compile_subject(spec, subject, *subject.admin_horizon);
    if (std::holds_alternative<Excluded>(res)) {
      ++ds.n_excluded_no_origin;
      continue;
    }
    ds.observations.push_back(std::move(std::get<DerivedObservation>(res)));
  }
  return ds;
}

}  // namespace tte
