#pragma once

#include <stdexcept>
#include <string>

namespace tte {

// Every failure the library can raise, named so callers can branch on them.
enum class errc {
  // event model
  negative_time,
  event_after_death,
  duplicate_death,
  empty_arm_label,
  cutoff_before_entry,
  invalid_horizon,
  // estimand compiler
  missing_attribute,
  unknown_strategy,
  overlap_endpoint_intercurrent,
  unknown_summary_measure,
  principal_stratum_unsupported,
  undeclared_event_kind,
  unknown_spec,
  // survival / competing risks
  empty_data,
  non_positive_time,
  beyond_follow_up,
  q_out_of_range,
  undefined_quantile,
  unknown_cause,
  single_cause_only,
  // regression / tests
  no_events,
  all_one_arm,
  singular_information,
  // simulation
  invalid_scenario,
  too_few_regimes,
  // planning
  hr_equals_one,
  invalid_probability,
  // i/o
  parse_error,
  unknown_subject_in_events,
  io_error,
};

const char* errc_name(errc code);

// Exit-code buckets for the CLI: 2 validation, 3 numeric, 4 i/o.
int errc_exit_code(errc code);

class Error : public std::runtime_error {
 public:
  Error(errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  errc code() const { return code_; }
  const char* code_name() const { return errc_name(code_); }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace tte
