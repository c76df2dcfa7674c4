#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tte/arm_data.hpp"

namespace tte {

enum class TiesMethod { breslow, efron };

// Two-arm Cox partial-likelihood fit (single binary covariate, optional
// strata). Solved by Newton iteration with step-halving; the partial
// log-likelihood is concave in beta.
struct CoxFit {
  double beta_hat = 0.0;
  double se = 0.0;
  double loglik_null = 0.0;   // at beta = 0
  double loglik_hat = 0.0;    // at beta_hat
  double score_chi2 = 0.0;    // score test at beta = 0
  double wald_chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  // One arm's events exhaust the risk sets: the likelihood increases
  // monotonically and no finite maximizer exists. Reported as a flag, not an
  // error; beta_hat then holds the point where iteration stopped.
  bool monotone_likelihood = false;
  TiesMethod ties = TiesMethod::breslow;
  int n_strata = 1;
  int n_events = 0;
};

CoxFit cox_fit(const std::vector<ArmRecord>& data,
               TiesMethod ties = TiesMethod::breslow, bool stratified = false);

// Shipped diagnostic for the score-test/logrank identity (Breslow ties,
// common strata): both statistics and their absolute gap.
struct ScoreLogrankCheck {
  double chi2_score = 0.0;
  double chi2_logrank = 0.0;
  double gap = 0.0;
};

ScoreLogrankCheck score_logrank_check(const std::vector<ArmRecord>& data,
                                      bool stratified = false);

// Average regression effect (Xu-O'Quigley): solves the weighted score
// equation with event-time weights w(t) = S_pooled(t-) / (Y(t)/n), the
// pooled Kaplan-Meier over the at-risk fraction. With no censoring the
// weights are identically 1 and the estimate equals the Cox fit. The
// confidence interval is a seeded percentile bootstrap (resampling within
// arm).
struct AvgEffectOptions {
  int bootstrap_resamples = 1000;  // 0 disables the interval
  std::uint64_t seed = 0;
  double level = 0.95;
  unsigned threads = 1;
};

struct AvgEffectEstimate {
  double beta_bar = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double weight_min = 0.0;
  double weight_max = 0.0;
  double weight_mean = 0.0;
  bool converged = false;
  bool monotone_likelihood = false;
  int bootstrap_used = 0;  // resamples that produced a finite estimate
};

AvgEffectEstimate avg_regression_effect(const std::vector<ArmRecord>& data,
                                        const AvgEffectOptions& opts = {});

}  // namespace tte
