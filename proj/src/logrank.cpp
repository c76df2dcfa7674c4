#include "tte/logrank.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "tte/error.hpp"
#include "tte/numeric.hpp"
#include "tte/rng.hpp"

namespace tte {

namespace {

struct UV {
  double u = 0.0;
  double v = 0.0;
};

// Logrank contributions of one stratum. Records must be sorted by time.
UV stratum_uv(const std::vector<const ArmRecord*>& records) {
  UV uv;
  const std::size_t n = records.size();
  int risk_exp = 0;
  for (const auto* r : records) risk_exp += r->experimental;
  std::size_t i = 0;
  while (i < n) {
    const double t = records[i]->time;
    const int at_risk = static_cast<int>(n - i);
    const int at_risk_exp = risk_exp;
    int d = 0, d_exp = 0;
    std::size_t j = i;
    while (j < n && records[j]->time == t) {
      if (records[j]->is_event) {
        ++d;
        if (records[j]->experimental) ++d_exp;
      }
      risk_exp -= records[j]->experimental ? 1 : 0;
      ++j;
    }
    if (d > 0) {
      const double frac = static_cast<double>(at_risk_exp) / at_risk;
      uv.u += d_exp - d * frac;
      if (at_risk > 1)
        uv.v += d * frac * (1.0 - frac) *
                (static_cast<double>(at_risk - d) / (at_risk - 1));
    }
    i = j;
  }
  return uv;
}

}  // namespace

TestResult logrank(const std::vector<ArmRecord>& data, bool stratified) {
  if (data.empty()) fail(errc::empty_data, "logrank: no records");

  TestResult res;
  res.method = stratified ? "stratified_logrank" : "logrank";

  bool any_exp = false, any_ctrl = false;
  for (const auto& r : data) {
    (r.experimental ? any_exp : any_ctrl) = true;
    if (r.is_event) (r.experimental ? res.n_events_experimental : res.n_events_control)++;
  }
  if (!any_exp || !any_ctrl) fail(errc::all_one_arm, "logrank: both arms required");
  if (res.n_events_experimental + res.n_events_control == 0)
    fail(errc::no_events, "logrank: no events");

  std::map<std::string, std::vector<const ArmRecord*>> strata;
  for (const auto& r : data) strata[stratified ? r.stratum : std::string{}].push_back(&r);

  double u = 0.0, v = 0.0;
  for (auto& [label, records] : strata) {
    std::sort(records.begin(), records.end(),
              [](const ArmRecord* a, const ArmRecord* b) { return a->time < b->time; });
    const UV uv = stratum_uv(records);
    u += uv.u;
    v += uv.v;
  }

  res.observed_minus_expected = u;
  res.statistic = v > 0.0 ? u * u / v : 0.0;
  res.p_value = v > 0.0 ? chisq1_sf(res.statistic) : 1.0;
  return res;
}

TestResult rerandomization_test(const std::vector<ArmRecord>& data, int permutations,
                                std::uint64_t seed, bool stratified,
                                unsigned threads) {
  if (permutations < 1)
    fail(errc::invalid_scenario, "rerandomization_test: permutations must be >= 1");

  TestResult observed = logrank(data, stratified);

  // Index the records per stratum once; each replicate shuffles arm labels
  // within strata.
  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < data.size(); ++i)
    groups[stratified ? data[i].stratum : std::string{}].push_back(i);

  std::vector<char> geq(static_cast<std::size_t>(permutations), 0);
  parallel_for(static_cast<std::size_t>(permutations), threads, [&](std::size_t b) {
    Rng rng(derive_seed(seed, b));
    std::vector<ArmRecord> permuted = data;
    for (const auto& [label, idx] : groups) {
      std::vector<char> labels;
      labels.reserve(idx.size());
      for (std::size_t i : idx) labels.push_back(data[i].experimental ? 1 : 0);
      rng.shuffle(labels);
      for (std::size_t k = 0; k < idx.size(); ++k)
        permuted[idx[k]].experimental = labels[k] != 0;
    }
    double stat = 0.0;
    try {
      stat = logrank(permuted, stratified).statistic;
    } catch (const Error&) {
      stat = 0.0;  // degenerate permutation; counts as non-extreme unless observed is 0
    }
    geq[b] = stat >= observed.statistic ? 1 : 0;
  });

  int count = 0;
  for (char g : geq) count += g;

  TestResult res = observed;
  res.method = stratified ? "stratified_rerandomization" : "rerandomization";
  res.permutations = permutations;
  res.p_value = (1.0 + count) / (permutations + 1.0);
  return res;
}

}  // namespace tte
