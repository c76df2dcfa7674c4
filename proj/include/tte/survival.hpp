#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tte {

// One (time, event) analysis record. is_event=false means right-censored.
struct TimeEvent {
  double time = 0.0;
  bool is_event = false;
};

// Product-limit estimate on the grid of distinct event times. S(0)=1 is
// implicit; max_follow_up is the largest observed time (event or censoring)
// and bounds every lookup; the curve is never extrapolated past it.
struct SurvivalCurve {
  std::vector<double> times;
  std::vector<double> estimates;
  std::vector<double> greenwood_var;
  std::vector<int> at_risk;
  std::vector<int> n_events;
  int n_total = 0;
  double max_follow_up = 0.0;

  // Step-function lookup; t must be within follow-up.
  double survival_at_time(double t) const;
  double variance_at_time(double t) const;
};

enum class ContrastScale { difference, ratio, odds_ratio, log_hazard_ratio };

const char* contrast_scale_name(ContrastScale s);

struct EffectEstimate {
  double value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  ContrastScale scale = ContrastScale::difference;
  std::string method;
};

// Ties convention throughout: events strictly before censorings at equal
// times (censored records at t stay in the risk set of events at t).
SurvivalCurve kaplan_meier(const std::vector<TimeEvent>& data);

// Milestone survival S(t0) with a log(-log) Greenwood confidence interval.
EffectEstimate survival_at(const SurvivalCurve& curve, double t0,
                           double level = 0.95);

// Smallest event time with S(t) <= 1-q, or nullopt when the curve never
// drops that far.
std::optional<double> survival_quantile(const SurvivalCurve& curve, double q);

// Restricted mean survival time over [0,tau] with the usual asymptotic
// variance built from Greenwood increments.
EffectEstimate rmst(const SurvivalCurve& curve, double tau,
                    double level = 0.95);

enum class ContrastMeasure { milestone, quantile, rmst };

struct ContrastOptions {
  double level = 0.95;
  int bootstrap_resamples = 2000;  // quantile differences only
  std::uint64_t seed = 0;
  // Fallback for tiny samples: replace the asymptotic RMST-difference
  // interval with a percentile bootstrap (bootstrap_resamples, seeded).
  bool rmst_bootstrap = false;
};

// Two-arm contrast of milestone survival, a survival quantile, or RMST on
// the requested scale. Pass the raw samples; curves are fit internally
// (quantile-difference intervals need resampling).
EffectEstimate contrast(const std::vector<TimeEvent>& experimental,
                        const std::vector<TimeEvent>& control,
                        ContrastMeasure measure, double param,
                        ContrastScale scale, const ContrastOptions& opts = {});

}  // namespace tte
