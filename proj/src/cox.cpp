#include "tte/cox.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "tte/error.hpp"
#include "tte/logrank.hpp"
#include "tte/numeric.hpp"
#include "tte/rng.hpp"

namespace tte {

namespace {

// Risk-set summary at one event time within one stratum.
struct EventGroup {
  int at_risk_exp = 0;
  int at_risk_ctrl = 0;
  int d = 0;      // events at this time
  int d_exp = 0;  // events in the experimental arm
  double weight = 1.0;
};

struct Grid {
  std::vector<EventGroup> groups;
  int n_events = 0;
  int n_strata = 0;
};

Grid build_grid(const std::vector<ArmRecord>& data, bool stratified) {
  std::map<std::string, std::vector<const ArmRecord*>> strata;
  for (const auto& r : data) strata[stratified ? r.stratum : std::string{}].push_back(&r);

  Grid grid;
  grid.n_strata = static_cast<int>(strata.size());
  for (auto& [label, records] : strata) {
    std::sort(records.begin(), records.end(),
              [](const ArmRecord* a, const ArmRecord* b) { return a->time < b->time; });
    const std::size_t n = records.size();
    // at-risk counts by walking the sorted records once
    int risk_exp = 0;
    for (const auto* r : records) risk_exp += r->experimental;
    int risk_all = static_cast<int>(n);
    std::size_t i = 0;
    while (i < n) {
      const double t = records[i]->time;
      EventGroup g;
      g.at_risk_exp = risk_exp;
      g.at_risk_ctrl = risk_all - risk_exp;
      std::size_t j = i;
      while (j < n && records[j]->time == t) {
        if (records[j]->is_event) {
          ++g.d;
          if (records[j]->experimental) ++g.d_exp;
        }
        risk_exp -= records[j]->experimental ? 1 : 0;
        --risk_all;
        ++j;
      }
      if (g.d > 0) {
        grid.groups.push_back(g);
        grid.n_events += g.d;
      }
      i = j;
    }
  }
  return grid;
}

struct Derivatives {
  double loglik = 0.0;
  double score = 0.0;
  double info = 0.0;
};

Derivatives evaluate(const Grid& grid, double beta, TiesMethod ties) {
  Derivatives out;
  const double eb = std::exp(beta);
  for (const auto& g : grid.groups) {
    const double r1 = g.at_risk_exp * eb;
    const double r0 = g.at_risk_ctrl;
    if (ties == TiesMethod::breslow || g.d == 1) {
      const double denom = r1 + r0;
      const double p = r1 / denom;
      out.loglik += g.weight * (beta * g.d_exp - g.d * std::log(denom));
      out.score += g.weight * (g.d_exp - g.d * p);
      out.info += g.weight * g.d * p * (1.0 - p);
    } else {
      // Efron: tied events share the risk set, removed in fractions.
      const double tie1 = g.d_exp * eb;
      const double tie0 = g.d - g.d_exp;
      out.loglik += g.weight * beta * g.d_exp;
      for (int l = 0; l < g.d; ++l) {
        const double frac = static_cast<double>(l) / g.d;
        const double num = r1 - frac * tie1;
        const double denom = (r1 + r0) - frac * (tie1 + tie0);
        const double p = num / denom;
        out.loglik -= g.weight * std::log(denom);
        out.score += g.weight * (static_cast<double>(g.d_exp) / g.d - p);
        out.info += g.weight * p * (1.0 - p);
      }
    }
  }
  return out;
}

struct SolveResult {
  double beta = 0.0;
  double se = 0.0;
  double loglik_null = 0.0;
  double loglik_hat = 0.0;
  double score_chi2 = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = false;
};

constexpr double kScoreTol = 1e-9;
constexpr double kStepTol = 1e-10;
constexpr int kMaxIter = 50;
constexpr int kMaxHalvings = 20;
// |log HR| beyond this is taken as a diverging (monotone) likelihood; the
// score can dip below tolerance near such betas, so the bound is checked
// even after nominal convergence.
constexpr double kBetaBound = 15.0;

SolveResult solve(const Grid& grid, TiesMethod ties) {
  if (grid.n_events == 0) fail(errc::no_events, "cox_fit: no events");

  SolveResult res;
  Derivatives at0 = evaluate(grid, 0.0, ties);
  res.loglik_null = at0.loglik;
  if (!(at0.info > 0.0))
    fail(errc::singular_information,
         "cox_fit: zero information at beta=0 (one arm never at risk at event times)");
  res.score_chi2 = at0.score * at0.score / at0.info;

  double beta = 0.0;
  Derivatives cur = at0;
  for (res.iterations = 0; res.iterations < kMaxIter; ++res.iterations) {
    if (std::fabs(cur.score) < kScoreTol) {
      res.converged = true;
      break;
    }
    if (!(cur.info > 0.0)) break;
    double step = cur.score / cur.info;
    Derivatives next = evaluate(grid, beta + step, ties);
    int halvings = 0;
    while (next.loglik < cur.loglik && halvings < kMaxHalvings) {
      step /= 2;
      next = evaluate(grid, beta + step, ties);
      ++halvings;
    }
    beta += step;
    cur = next;
    if (std::fabs(beta) > kBetaBound) {
      res.monotone = true;
      break;
    }
    if (std::fabs(step) < kStepTol) {
      res.converged = std::fabs(cur.score) < std::sqrt(kScoreTol);
      break;
    }
  }
  if (!res.converged && !res.monotone && std::fabs(cur.score) < kScoreTol)
    res.converged = true;
  if (std::fabs(beta) >= kBetaBound) {
    res.monotone = true;
    res.converged = false;
  }

  res.beta = beta;
  res.loglik_hat = cur.loglik;
  res.se = cur.info > 0.0 ? 1.0 / std::sqrt(cur.info) : 0.0;
  return res;
}

void check_arms(const std::vector<ArmRecord>& data) {
  bool any_exp = false, any_ctrl = false;
  for (const auto& r : data) (r.experimental ? any_exp : any_ctrl) = true;
  if (!any_exp || !any_ctrl) fail(errc::all_one_arm, "cox_fit: both arms required");
}

}  // namespace

CoxFit cox_fit(const std::vector<ArmRecord>& data, TiesMethod ties, bool stratified) {
  if (data.empty()) fail(errc::empty_data, "cox_fit: no records");
  check_arms(data);

  const Grid grid = build_grid(data, stratified);
  const SolveResult sr = solve(grid, ties);

  CoxFit fit;
  fit.beta_hat = sr.beta;
  fit.se = sr.se;
  fit.loglik_null = sr.loglik_null;
  fit.loglik_hat = sr.loglik_hat;
  fit.score_chi2 = sr.score_chi2;
  fit.wald_chi2 = sr.se > 0.0 ? (sr.beta / sr.se) * (sr.beta / sr.se) : 0.0;
  fit.iterations = sr.iterations;
  fit.converged = sr.converged;
  fit.monotone_likelihood = sr.monotone;
  fit.ties = ties;
  fit.n_strata = grid.n_strata;
  fit.n_events = grid.n_events;
  return fit;
}

ScoreLogrankCheck score_logrank_check(const std::vector<ArmRecord>& data,
                                      bool stratified) {
  ScoreLogrankCheck chk;
  chk.chi2_score = cox_fit(data, TiesMethod::breslow, stratified).score_chi2;
  chk.chi2_logrank = logrank(data, stratified).statistic;
  chk.gap = std::fabs(chk.chi2_score - chk.chi2_logrank);
  return chk;
}

namespace {

// Attach w(t) = S_pooled(t-) / (Y(t)/n) to every event-time group. The grid
// must be unstratified and in time order, which build_grid guarantees for a
// single stratum.
void attach_xoq_weights(const std::vector<ArmRecord>& data, Grid& grid) {
  // With no censoring, S(t-) = Y(t)/n exactly under the events-first tie
  // convention, so every weight is 1 and the estimate is the Cox fit.
  bool any_censored = false;
  for (const auto& r : data) any_censored = any_censored || !r.is_event;
  if (!any_censored) return;

  const double n = static_cast<double>(data.size());

  // Walk the pooled KM alongside the grid: groups are ordered by time and
  // S(t-) is the product of factors at strictly earlier event times.
  double s_before = 1.0;
  for (auto& g : grid.groups) {
    const double at_risk = g.at_risk_exp + g.at_risk_ctrl;
    g.weight = s_before * n / at_risk;
    s_before *= 1.0 - static_cast<double>(g.d) / at_risk;
  }
}

double solve_weighted_beta(const std::vector<ArmRecord>& data, bool& converged,
                           bool& monotone) {
  Grid grid = build_grid(data, /*stratified=*/false);
  attach_xoq_weights(data, grid);
  const SolveResult sr = solve(grid, TiesMethod::breslow);
  converged = sr.converged;
  monotone = sr.monotone;
  return sr.beta;
}

}  // namespace

AvgEffectEstimate avg_regression_effect(const std::vector<ArmRecord>& data,
                                        const AvgEffectOptions& opts) {
  if (data.empty()) fail(errc::empty_data, "avg_regression_effect: no records");
  check_arms(data);

  Grid grid = build_grid(data, /*stratified=*/false);
  attach_xoq_weights(data, grid);

  AvgEffectEstimate est;
  est.weight_min = est.weight_max = grid.groups.empty() ? 0.0 : grid.groups.front().weight;
  double wsum = 0.0;
  int wcount = 0;
  for (const auto& g : grid.groups) {
    est.weight_min = std::min(est.weight_min, g.weight);
    est.weight_max = std::max(est.weight_max, g.weight);
    wsum += g.weight * g.d;
    wcount += g.d;
  }
  est.weight_mean = wcount > 0 ? wsum / wcount : 0.0;

  const SolveResult sr = solve(grid, TiesMethod::breslow);
  est.beta_bar = sr.beta;
  est.converged = sr.converged;
  est.monotone_likelihood = sr.monotone;
  est.ci_low = est.ci_high = sr.beta;

  if (opts.bootstrap_resamples > 0) {
    std::vector<std::size_t> exp_idx, ctrl_idx;
    for (std::size_t i = 0; i < data.size(); ++i)
      (data[i].experimental ? exp_idx : ctrl_idx).push_back(i);

    std::vector<double> betas(static_cast<std::size_t>(opts.bootstrap_resamples),
                              std::numeric_limits<double>::quiet_NaN());
    parallel_for(betas.size(), opts.threads, [&](std::size_t b) {
      Rng rng(derive_seed(opts.seed, b));
      std::vector<ArmRecord> resample;
      resample.reserve(data.size());
      for (std::size_t k = 0; k < exp_idx.size(); ++k)
        resample.push_back(data[exp_idx[static_cast<std::size_t>(rng.below(exp_idx.size()))]]);
      for (std::size_t k = 0; k < ctrl_idx.size(); ++k)
        resample.push_back(data[ctrl_idx[static_cast<std::size_t>(rng.below(ctrl_idx.size()))]]);
      try {
        bool conv = false, mono = false;
        const double beta = solve_weighted_beta(resample, conv, mono);
        if (conv && !mono) betas[b] = beta;
      } catch (const Error&) {
        // degenerate resample; dropped below
      }
    });

    std::vector<double> finite;
    finite.reserve(betas.size());
    for (double b : betas)
      if (std::isfinite(b)) finite.push_back(b);
    est.bootstrap_used = static_cast<int>(finite.size());
    if (finite.size() >= 2) {
      std::sort(finite.begin(), finite.end());
      const double alpha = 1 - opts.level;
      auto pick = [&finite](double p) {
        const double pos = p * static_cast<double>(finite.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, finite.size() - 1);
        const double w = pos - static_cast<double>(lo);
        return (1 - w) * finite[lo] + w * finite[hi];
      };
      est.ci_low = pick(alpha / 2);
      est.ci_high = pick(1 - alpha / 2);
      est.ci_low = std::min(est.ci_low, est.beta_bar);
      est.ci_high = std::max(est.ci_high, est.beta_bar);
    }
  }
  return est;
}

}  // namespace tte
