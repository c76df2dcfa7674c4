#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tte/arm_data.hpp"

namespace tte {

struct TestResult {
  double statistic = 0.0;       // chi-square, 1 df
  double p_value = 1.0;
  std::string method;
  int n_events_experimental = 0;
  int n_events_control = 0;
  // Direction: observed minus expected events in the experimental arm.
  double observed_minus_expected = 0.0;
  int permutations = 0;  // rerandomization only
};

// (Stratified) logrank test: U = sum over strata and event times of
// d_exp - e_exp with the hypergeometric variance; chi2 = U^2/V.
TestResult logrank(const std::vector<ArmRecord>& data, bool stratified = false);

// Re-randomization test: permutes arm labels within strata B times and
// compares the (stratified) logrank chi-square against its permutation
// distribution. p = (1 + #{perm >= observed}) / (B + 1). Reproducible from
// the seed, independent of the thread count.
TestResult rerandomization_test(const std::vector<ArmRecord>& data, int permutations,
                                std::uint64_t seed, bool stratified = false,
                                unsigned threads = 1);

}  // namespace tte
