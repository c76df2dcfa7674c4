#include "tte/competing.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "tte/error.hpp"
#include "tte/rng.hpp"

namespace tte {

double IncidenceCurve::cif_at_time(double t) const {
  double v = 0.0;
  for (std::size_t i = 0; i < times.size() && times[i] <= t; ++i) v = cif[i];
  return v;
}

namespace {

struct Grid {
  // Per distinct failure time: at-risk count, all-cause failures, per-cause
  // failures.
  std::vector<double> times;
  std::vector<int> at_risk;
  std::vector<int> d_all;
  std::vector<std::map<std::string, int>> d_cause;
  std::vector<std::string> causes;  // sorted, stable
  int n = 0;
  double max_follow_up = 0.0;
};

Grid build_grid(const std::vector<CauseRecord>& data) {
  if (data.empty()) fail(errc::empty_data, "aalen_johansen: no records");
  for (const auto& r : data)
    if (!(r.time > 0) || !std::isfinite(r.time))
      fail(errc::non_positive_time, "aalen_johansen: times must be positive and finite");

  std::vector<CauseRecord> sorted = data;
  std::sort(sorted.begin(), sorted.end(),
            [](const CauseRecord& a, const CauseRecord& b) { return a.time < b.time; });

  Grid g;
  g.n = static_cast<int>(sorted.size());
  g.max_follow_up = sorted.back().time;
  std::set<std::string> cause_set;
  std::size_t i = 0;
  const std::size_t n = sorted.size();
  while (i < n) {
    const double t = sorted[i].time;
    const int at_risk = static_cast<int>(n - i);
    int d = 0;
    std::map<std::string, int> by_cause;
    std::size_t j = i;
    while (j < n && sorted[j].time == t) {
      if (sorted[j].failed) {
        ++d;
        ++by_cause[sorted[j].cause];
        cause_set.insert(sorted[j].cause);
      }
      ++j;
    }
    if (d > 0) {
      g.times.push_back(t);
      g.at_risk.push_back(at_risk);
      g.d_all.push_back(d);
      g.d_cause.push_back(std::move(by_cause));
    }
    i = j;
  }
  g.causes.assign(cause_set.begin(), cause_set.end());
  return g;
}

}  // namespace

std::vector<IncidenceCurve> aalen_johansen(const std::vector<CauseRecord>& data,
                                           const AalenJohansenOptions& opts) {
  const Grid g = build_grid(data);

  const std::size_t m = g.times.size();
  std::vector<double> surv(m);  // all-cause KM at each grid time
  std::vector<double> surv_before(m);
  double s = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    surv_before[j] = s;
    s *= 1.0 - static_cast<double>(g.d_all[j]) / g.at_risk[j];
    surv[j] = s;
  }

  std::vector<IncidenceCurve> out;
  for (const auto& cause : g.causes) {
    IncidenceCurve c;
    c.cause = cause;
    c.n_total = g.n;
    c.max_follow_up = g.max_follow_up;
    c.times = g.times;
    c.overall_survival = surv;
    c.cif.resize(m);
    c.variance.resize(m);

    double acc = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      auto it = g.d_cause[j].find(cause);
      const int dk = it == g.d_cause[j].end() ? 0 : it->second;
      acc += surv_before[j] * static_cast<double>(dk) / g.at_risk[j];
      // One-cause degeneracy: the CIF is exactly the KM complement; take it
      // literally so the identity holds bit-for-bit.
      c.cif[j] = g.causes.size() == 1 ? 1.0 - surv[j] : acc;
    }

    // Aalen (1978) / Marubini-Valsecchi variance estimator: three running
    // sums in the increments, evaluated at each grid time.
    for (std::size_t j = 0; j < m; ++j) {
      double v = 0.0;
      for (std::size_t l = 0; l <= j; ++l) {
        const double y = g.at_risk[l];
        const double d = g.d_all[l];
        auto it = g.d_cause[l].find(cause);
        const double dk = it == g.d_cause[l].end() ? 0.0 : it->second;
        const double tail = c.cif[j] - c.cif[l];
        if (y > d) v += tail * tail * d / (y * (y - d));
        v += surv_before[l] * surv_before[l] * ((y - dk) / y) * dk / (y * y);
        v -= 2.0 * tail * surv_before[l] * dk / (y * y);
      }
      c.variance[j] = std::max(0.0, v);
    }
    out.push_back(std::move(c));
  }

  // Bootstrap fallback: pointwise resampling variance of each CIF on the
  // observed grid, seeded per resample.
  if (opts.bootstrap_resamples > 0) {
    std::map<std::string, std::vector<double>> sum, sumsq;
    for (const auto& c : out) {
      sum[c.cause].assign(m, 0.0);
      sumsq[c.cause].assign(m, 0.0);
    }
    int used = 0;
    for (int b = 0; b < opts.bootstrap_resamples; ++b) {
      Rng rng(derive_seed(opts.seed, static_cast<std::uint64_t>(b)));
      std::vector<CauseRecord> resample(data.size());
      for (auto& r : resample) r = data[static_cast<std::size_t>(rng.below(data.size()))];
      std::vector<IncidenceCurve> curves;
      try {
        curves = aalen_johansen(resample, AalenJohansenOptions{});
      } catch (const Error&) {
        continue;
      }
      ++used;
      for (auto& [cause, acc] : sum) {
        const IncidenceCurve* found = nullptr;
        for (const auto& c : curves)
          if (c.cause == cause) found = &c;
        for (std::size_t j = 0; j < m; ++j) {
          const double v = found ? found->cif_at_time(g.times[j]) : 0.0;
          acc[j] += v;
          sumsq[cause][j] += v * v;
        }
      }
    }
    if (used > 1)
      for (auto& c : out)
        for (std::size_t j = 0; j < m; ++j) {
          const double mean = sum[c.cause][j] / used;
          c.variance[j] =
              std::max(0.0, (sumsq[c.cause][j] - used * mean * mean) / (used - 1));
        }
  }
  return out;
}

std::vector<TimeEvent> cause_specific_dataset(const std::vector<CauseRecord>& data,
                                              const std::string& cause) {
  bool known = false;
  for (const auto& r : data)
    if (r.failed && r.cause == cause) known = true;
  if (!known)
    fail(errc::unknown_cause, "cause_specific_dataset: no failures from cause '" + cause + "'");
  std::vector<TimeEvent> out;
  out.reserve(data.size());
  for (const auto& r : data)
    out.push_back({r.time, r.failed && r.cause == cause});
  return out;
}

std::vector<NaiveKmReport> naive_km_comparison(const std::vector<CauseRecord>& data) {
  std::set<std::string> causes;
  for (const auto& r : data)
    if (r.failed) causes.insert(r.cause);
  if (causes.size() < 2)
    fail(errc::single_cause_only,
         "naive_km_comparison: needs at least two observed causes");

  const auto curves = aalen_johansen(data);
  std::vector<NaiveKmReport> out;
  for (const auto& curve : curves) {
    NaiveKmReport rep;
    rep.cause = curve.cause;
    const SurvivalCurve naive = kaplan_meier(cause_specific_dataset(data, curve.cause));
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
      NaiveKmRow row;
      row.time = curve.times[j];
      row.one_minus_km = 1.0 - naive.survival_at_time(row.time);
      row.cif = curve.cif[j];
      rep.max_gap = std::max(rep.max_gap, row.one_minus_km - row.cif);
      rep.rows.push_back(row);
    }
    out.push_back(std::move(rep));
  }
  return out;
}

}  // namespace tte
