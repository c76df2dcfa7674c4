#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tte/event_model.hpp"
#include "tte/survival.hpp"

namespace tte {

// The five intercurrent-event strategies. while_on_treatment carries the
// competing-cause label the event is recorded under. principal_stratum is
// representable (documents round-trip) but any attempt to derive data under
// it is rejected: stratum membership is not estimable from the data model.
enum class StrategyKind {
  treatment_policy,
  composite,
  hypothetical,
  while_on_treatment,
  principal_stratum,
};

const char* strategy_name(StrategyKind k);
StrategyKind parse_strategy(const std::string& name);

struct Strategy {
  StrategyKind kind = StrategyKind::treatment_policy;
  std::string cause;  // while_on_treatment only

  bool operator==(const Strategy&) const = default;
};

// Per-kind handling rule: a base strategy plus optional per-arm overrides
// (e.g. GALLIUM Supplementary 1's worst-case rule) and an optional staleness
// rule (GALLIUM Supplementary 5): when the event falls `stale_censor_gap`
// days or more after the last response assessment, the subject is censored
// at that assessment instead.
struct IntercurrentRule {
  Strategy base;
  std::map<std::string, Strategy> arm_override;
  std::optional<double> stale_censor_gap;

  const Strategy& for_arm(const std::string& arm) const;

  bool operator==(const IntercurrentRule&) const = default;
};

// One conjunct of the population filter.
struct FilterClause {
  enum class Field { arm, stratum, covariate };
  Field field = Field::stratum;
  std::string name;                // stratum / covariate name
  std::string eq_value;            // arm & stratum equality
  std::optional<double> min, max;  // covariate range, inclusive

  bool matches(const SubjectTimeline& subject) const;
  bool operator==(const FilterClause&) const = default;
};

enum class MeasureKind {
  logrank,
  stratified_logrank,
  cox_hr,
  avg_regression_effect,
  milestone,
  quantile_diff,
  rmst_diff,
};

enum class GatekeeperKind { none, logrank, stratified_logrank, rerandomization };

const char* measure_name(MeasureKind m);
const char* gatekeeper_name(GatekeeperKind g);

struct SummaryMeasure {
  MeasureKind measure = MeasureKind::cox_hr;
  double param = 0.0;  // t0 (milestone) | q (quantile_diff) | tau (rmst_diff)
  bool stratified = false;
  ContrastScale scale = ContrastScale::difference;
  GatekeeperKind gatekeeper = GatekeeperKind::none;

  bool operator==(const SummaryMeasure&) const = default;
};

// A declarative four-attribute estimand: population, variable (origin +
// endpoint events), one strategy per intercurrent kind, summary measure.
struct EstimandSpec {
  std::string name;
  std::string variable;  // descriptive endpoint label (PFS, OS, EFS, ...)
  std::string description;
  std::vector<FilterClause> population_filter;
  std::vector<std::string> origin_kinds;  // empty = randomisation (time 0)
  std::set<std::string> endpoint_kinds;
  std::map<std::string, IntercurrentRule> strategies;
  SummaryMeasure summary;
  // Administrative censoring at the last response_assessment instead of the
  // horizon (the GALLIUM "last non-PD tumor assessment" rule).
  bool censor_at_last_assessment = false;

  // endpoint_kinds plus every composite-mapped kind (arm-independent part).
  std::set<std::string> effective_endpoints() const;
};

EstimandSpec parse_spec(const std::string& text);
EstimandSpec parse_spec_file(const std::string& path);

// Serialize back to the config grammar (docs, `specs show`, round-trips).
std::string emit_spec(const EstimandSpec& spec);

enum class StatusKind { event, censored, competing };

struct DerivedStatus {
  StatusKind kind = StatusKind::censored;
  std::string cause;  // competing only

  bool operator==(const DerivedStatus&) const = default;
};

struct DerivationLogEntry {
  std::string event_kind;  // "" for administrative decisions
  std::string strategy;
  std::string action;
  double time = 0.0;  // time from origin
};

struct DerivedObservation {
  std::string subject_id;
  double time = 0.0;  // days from origin
  DerivedStatus status;
  std::string arm;
  std::map<std::string, std::string> strata;
  std::vector<DerivationLogEntry> derivation_log;
};

struct Excluded {
  std::string reason;  // "no_origin_event" | "no_follow_up_after_origin"
};

using CompileResult = std::variant<DerivedObservation, Excluded>;

// Compile one validated, cutoff-applied timeline against a spec. Scans
// events from the origin in time order; the first terminating decision wins,
// with ties at equal times resolved by Event > Competing > Censored.
CompileResult compile_subject(const EstimandSpec& spec,
                              const SubjectTimeline& subject, double horizon);

struct DerivedDataset {
  std::vector<DerivedObservation> observations;
  std::string spec_name;
  int n_excluded_by_population = 0;
  int n_excluded_no_origin = 0;
};

// Population filter + clinical cutoff + compile_subject over the whole
// cohort. Deterministic; observation order follows cohort order.
DerivedDataset derive_dataset(const EstimandSpec& spec, const Cohort& cohort);

// Shipped preset estimands (DLBCL Options 1-5, the GALLIUM analyses).
const std::vector<EstimandSpec>& builtin_specs();
const EstimandSpec& builtin_spec(const std::string& name);
bool is_builtin_spec(const std::string& name);

}  // namespace tte
