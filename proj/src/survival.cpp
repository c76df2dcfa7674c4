#include "tte/survival.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tte/error.hpp"
#include "tte/numeric.hpp"
#include "tte/rng.hpp"

namespace tte {

const char* contrast_scale_name(ContrastScale s) {
  switch (s) {
    case ContrastScale::difference: return "difference";
    case ContrastScale::ratio: return "ratio";
    case ContrastScale::odds_ratio: return "odds_ratio";
    case ContrastScale::log_hazard_ratio: return "log_hazard_ratio";
  }
  return "?";
}

double SurvivalCurve::survival_at_time(double t) const {
  double s = 1.0;
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) s = estimates[i];
  return s;
}

double SurvivalCurve::variance_at_time(double t) const {
  double v = 0.0;
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) v = greenwood_var[i];
  return v;
}

SurvivalCurve kaplan_meier(const std::vector<TimeEvent>& data) {
  if (data.empty()) fail(errc::empty_data, "kaplan_meier: no records");
  for (const auto& r : data)
    if (!(r.time > 0) || !std::isfinite(r.time))
      fail(errc::non_positive_time, "kaplan_meier: times must be positive and finite");

  std::vector<TimeEvent> sorted = data;
  std::sort(sorted.begin(), sorted.end(), [](const TimeEvent& a, const TimeEvent& b) {
    return a.time < b.time;
  });

  SurvivalCurve curve;
  curve.n_total = static_cast<int>(sorted.size());
  curve.max_follow_up = sorted.back().time;

  double s = 1.0;
  double gw_sum = 0.0;  // running sum d/(Y(Y-d))
  std::size_t i = 0;
  const std::size_t n = sorted.size();
  while (i < n) {
    const double t = sorted[i].time;
    const int at_risk = static_cast<int>(n - i);
    int d = 0;
    std::size_t j = i;
    while (j < n && sorted[j].time == t) {
      if (sorted[j].is_event) ++d;
      ++j;
    }
    if (d > 0) {
      s *= 1.0 - static_cast<double>(d) / at_risk;
      if (at_risk > d)
        gw_sum += static_cast<double>(d) / (static_cast<double>(at_risk) * (at_risk - d));
      curve.times.push_back(t);
      curve.estimates.push_back(s);
      // Greenwood; pinned to zero where the curve hits 0 (the d==Y term is
      // degenerate and S^2 kills the rest).
      curve.greenwood_var.push_back(s > 0.0 ? s * s * gw_sum : 0.0);
      curve.at_risk.push_back(at_risk);
      curve.n_events.push_back(d);
    }
    i = j;
  }
  return curve;
}

EffectEstimate survival_at(const SurvivalCurve& curve, double t0, double level) {
  if (t0 < 0) fail(errc::non_positive_time, "survival_at: t0 must be >= 0");
  if (t0 > curve.max_follow_up)
    fail(errc::beyond_follow_up, "survival_at: t0 exceeds the observed follow-up");
  const double s = curve.survival_at_time(t0);
  const double v = curve.variance_at_time(t0);
  EffectEstimate est;
  est.value = s;
  est.scale = ContrastScale::difference;
  est.method = "km_milestone_loglog";
  if (s <= 0.0 || s >= 1.0 || v <= 0.0) {
    est.ci_low = est.ci_high = s;  // degenerate
    return est;
  }
  const double z = normal_quantile(1 - (1 - level) / 2);
  const double se_cloglog = std::sqrt(v) / (s * std::fabs(std::log(s)));
  est.ci_low = std::pow(s, std::exp(z * se_cloglog));
  est.ci_high = std::pow(s, std::exp(-z * se_cloglog));
  return est;
}

std::optional<double> survival_quantile(const SurvivalCurve& curve, double q) {
  if (!(q > 0.0 && q < 1.0))
    fail(errc::q_out_of_range, "survival_quantile: q must be in (0,1)");
  for (std::size_t i = 0; i < curve.times.size(); ++i)
    if (curve.estimates[i] <= 1.0 - q) return curve.times[i];
  return std::nullopt;
}

EffectEstimate rmst(const SurvivalCurve& curve, double tau, double level) {
  if (!(tau > 0)) fail(errc::non_positive_time, "rmst: tau must be positive");
  if (tau > curve.max_follow_up)
    fail(errc::beyond_follow_up, "rmst: tau exceeds the observed follow-up");

  // Exact step integration of S over [0,tau].
  double area = 0.0;
  double prev_t = 0.0, prev_s = 1.0;
  std::vector<double> remaining;  // area from t_j to tau, per event time <= tau
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < curve.times.size() && curve.times[i] <= tau; ++i) {
    area += prev_s * (curve.times[i] - prev_t);
    prev_t = curve.times[i];
    prev_s = curve.estimates[i];
    idx.push_back(i);
  }
  area += prev_s * (tau - prev_t);

  // Suffix areas A(t_j) = int_{t_j}^{tau} S du for the variance below.
  remaining.resize(idx.size());
  for (std::size_t k = idx.size(); k-- > 0;) {
    if (k + 1 < idx.size())
      remaining[k] = remaining[k + 1] +
                     curve.estimates[idx[k]] * (curve.times[idx[k + 1]] - curve.times[idx[k]]);
    else
      remaining[k] = curve.estimates[idx[k]] * (tau - curve.times[idx[k]]);
  }

  double var = 0.0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const int y = curve.at_risk[idx[k]];
    const int d = curve.n_events[idx[k]];
    if (y > d)
      var += remaining[k] * remaining[k] * static_cast<double>(d) /
             (static_cast<double>(y) * (y - d));
  }

  EffectEstimate est;
  est.value = area;
  est.scale = ContrastScale::difference;
  est.method = "rmst";
  const double z = normal_quantile(1 - (1 - level) / 2);
  const double se = std::sqrt(var);
  est.ci_low = area - z * se;
  est.ci_high = area + z * se;
  return est;
}

namespace {

struct OneArm {
  double value;
  double var;
};

OneArm milestone_arm(const SurvivalCurve& c, double t0) {
  if (t0 > c.max_follow_up)
    fail(errc::beyond_follow_up, "contrast: t0 exceeds the observed follow-up");
  return {c.survival_at_time(t0), c.variance_at_time(t0)};
}

EffectEstimate wald_on_scale(double ve, double vare, double vc, double varc,
                             ContrastScale scale, double level,
                             const std::string& method) {
  EffectEstimate est;
  est.scale = scale;
  est.method = method;
  const double z = normal_quantile(1 - (1 - level) / 2);
  switch (scale) {
    case ContrastScale::difference: {
      est.value = ve - vc;
      const double se = std::sqrt(vare + varc);
      est.ci_low = est.value - z * se;
      est.ci_high = est.value + z * se;
      return est;
    }
    case ContrastScale::ratio: {
      if (!(ve > 0) || !(vc > 0))
        fail(errc::singular_information, "ratio contrast undefined at a zero estimate");
      const double lr = std::log(ve / vc);
      const double se = std::sqrt(vare / (ve * ve) + varc / (vc * vc));
      est.value = std::exp(lr);
      est.ci_low = std::exp(lr - z * se);
      est.ci_high = std::exp(lr + z * se);
      return est;
    }
    case ContrastScale::odds_ratio: {
      if (!(ve > 0 && ve < 1) || !(vc > 0 && vc < 1))
        fail(errc::singular_information, "odds-ratio contrast undefined at a boundary estimate");
      const double lo = std::log(ve / (1 - ve)) - std::log(vc / (1 - vc));
      const double se = std::sqrt(vare / (ve * ve * (1 - ve) * (1 - ve)) +
                                  varc / (vc * vc * (1 - vc) * (1 - vc)));
      est.value = std::exp(lo);
      est.ci_low = std::exp(lo - z * se);
      est.ci_high = std::exp(lo + z * se);
      return est;
    }
    case ContrastScale::log_hazard_ratio:
      fail(errc::unknown_summary_measure, "log_hazard_ratio is not a curve contrast scale");
  }
  fail(errc::unknown_summary_measure, "unknown contrast scale");
}

// Percentile bootstrap of an arm-contrast statistic, resampling within arm
// with per-resample seeds. Resamples where the statistic is undefined are
// dropped.
void bootstrap_interval(const std::vector<TimeEvent>& experimental,
                        const std::vector<TimeEvent>& control,
                        const std::function<std::optional<double>(
                            const std::vector<TimeEvent>&, const std::vector<TimeEvent>&)>& stat,
                        const ContrastOptions& opts, EffectEstimate& est) {
  std::vector<double> diffs;
  diffs.reserve(static_cast<std::size_t>(opts.bootstrap_resamples));
  for (int b = 0; b < opts.bootstrap_resamples; ++b) {
    Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(b)));
    auto resample = [&rng](const std::vector<TimeEvent>& src) {
      std::vector<TimeEvent> out(src.size());
      for (auto& r : out) r = src[static_cast<std::size_t>(rng.below(src.size()))];
      return out;
    };
    try {
      const auto v = stat(resample(experimental), resample(control));
      if (v) diffs.push_back(*v);
    } catch (const Error&) {
      // degenerate resample; drop it
    }
  }
  if (diffs.size() < 2) {
    est.ci_low = est.ci_high = est.value;
    return;
  }
  std::sort(diffs.begin(), diffs.end());
  const double alpha = 1 - opts.level;
  auto pick = [&diffs](double p) {
    const double pos = p * static_cast<double>(diffs.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, diffs.size() - 1);
    const double w = pos - static_cast<double>(lo);
    return (1 - w) * diffs[lo] + w * diffs[hi];
  };
  est.ci_low = std::min(pick(alpha / 2), est.value);
  est.ci_high = std::max(pick(1 - alpha / 2), est.value);
}

}  // namespace

EffectEstimate contrast(const std::vector<TimeEvent>& experimental,
                        const std::vector<TimeEvent>& control,
                        ContrastMeasure measure, double param,
                        ContrastScale scale, const ContrastOptions& opts) {
  const SurvivalCurve ce = kaplan_meier(experimental);
  const SurvivalCurve cc = kaplan_meier(control);

  switch (measure) {
    case ContrastMeasure::milestone: {
      const OneArm e = milestone_arm(ce, param);
      const OneArm c = milestone_arm(cc, param);
      return wald_on_scale(e.value, e.var, c.value, c.var, scale, opts.level,
                           "milestone_contrast");
    }
    case ContrastMeasure::rmst: {
      const EffectEstimate e = rmst(ce, param, opts.level);
      const EffectEstimate c = rmst(cc, param, opts.level);
      if (opts.rmst_bootstrap && scale == ContrastScale::difference) {
        EffectEstimate est;
        est.value = e.value - c.value;
        est.scale = scale;
        est.method = "rmst_contrast_bootstrap";
        bootstrap_interval(
            experimental, control,
            [param, &opts](const std::vector<TimeEvent>& be, const std::vector<TimeEvent>& bc)
                -> std::optional<double> {
              const auto ke = kaplan_meier(be);
              const auto kc = kaplan_meier(bc);
              if (param > ke.max_follow_up || param > kc.max_follow_up) return std::nullopt;
              return rmst(ke, param, opts.level).value - rmst(kc, param, opts.level).value;
            },
            opts, est);
        return est;
      }
      const double z = normal_quantile(1 - (1 - opts.level) / 2);
      const double se_e = (e.ci_high - e.value) / z;
      const double se_c = (c.ci_high - c.value) / z;
      return wald_on_scale(e.value, se_e * se_e, c.value, se_c * se_c, scale,
                           opts.level, "rmst_contrast");
    }
    case ContrastMeasure::quantile: {
      if (scale != ContrastScale::difference)
        fail(errc::unknown_summary_measure,
             "quantile contrasts support the difference scale only");
      auto qe = survival_quantile(ce, param);
      auto qc = survival_quantile(cc, param);
      if (!qe || !qc)
        fail(errc::undefined_quantile,
             "quantile contrast: the requested quantile is not reached in both arms");
      EffectEstimate est;
      est.value = *qe - *qc;
      est.scale = ContrastScale::difference;
      est.method = "quantile_diff_bootstrap";
      bootstrap_interval(
          experimental, control,
          [param](const std::vector<TimeEvent>& be, const std::vector<TimeEvent>& bc)
              -> std::optional<double> {
            const auto q_e = survival_quantile(kaplan_meier(be), param);
            const auto q_c = survival_quantile(kaplan_meier(bc), param);
            if (!q_e || !q_c) return std::nullopt;
            return *q_e - *q_c;
          },
          opts, est);
      return est;
    }
  }
  fail(errc::unknown_summary_measure, "unknown contrast measure");
}

}  // namespace tte
