#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tte/survival.hpp"

namespace tte {

// One observation in a multi-cause dataset: either censored or a failure
// from a named cause.
struct CauseRecord {
  double time = 0.0;
  bool failed = false;
  std::string cause;  // meaningful when failed
};

// Aalen-Johansen cumulative incidence for one cause, on the grid of all
// failure times (any cause). overall_survival carries the all-cause KM on
// the same grid so that sum_k cif_k + S = 1 can be checked pointwise.
struct IncidenceCurve {
  std::string cause;
  std::vector<double> times;
  std::vector<double> cif;
  std::vector<double> variance;
  std::vector<double> overall_survival;
  int n_total = 0;
  double max_follow_up = 0.0;

  double cif_at_time(double t) const;
};

// CIF_k(t) = sum_{s<=t} S(s-) d_k(s)/Y(s) for every cause observed in the
// data, with an Aalen-type variance estimator. The bootstrap fallback
// replaces the pointwise variance with a seeded resampling estimate (for
// samples too small to trust the asymptotic form).
struct AalenJohansenOptions {
  int bootstrap_resamples = 0;  // 0 = Aalen-type variance
  std::uint64_t seed = 0;
};

std::vector<IncidenceCurve> aalen_johansen(const std::vector<CauseRecord>& data,
                                           const AalenJohansenOptions& opts = {});

// Recode one cause as the event and everything else (censorings and other
// causes) as censored: the input for cause-specific hazard inference.
std::vector<TimeEvent> cause_specific_dataset(const std::vector<CauseRecord>& data,
                                              const std::string& cause);

// Pointwise comparison of the naive 1-KM (censoring at competing causes)
// against the CIF, per cause. Quantifies the bias of the naive estimate.
struct NaiveKmRow {
  double time;
  double one_minus_km;
  double cif;
};

struct NaiveKmReport {
  std::string cause;
  std::vector<NaiveKmRow> rows;
  double max_gap = 0.0;
};

std::vector<NaiveKmReport> naive_km_comparison(const std::vector<CauseRecord>& data);

}  // namespace tte
