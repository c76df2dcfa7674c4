#include "tte/error.hpp"

namespace tte {

const char* errc_name(errc code) {
  switch (code) {
    case errc::negative_time: return "NegativeTime";
    case errc::event_after_death: return "EventAfterDeath";
    case errc::duplicate_death: return "DuplicateDeath";
    case errc::empty_arm_label: return "EmptyArmLabel";
    case errc::cutoff_before_entry: return "CutoffBeforeEntry";
    case errc::invalid_horizon: return "InvalidHorizon";
    case errc::missing_attribute: return "MissingAttribute";
    case errc::unknown_strategy: return "UnknownStrategy";
    case errc::overlap_endpoint_intercurrent: return "OverlapEndpointIntercurrent";
    case errc::unknown_summary_measure: return "UnknownSummaryMeasure";
    case errc::principal_stratum_unsupported: return "PrincipalStratumUnsupported";
    case errc::undeclared_event_kind: return "UndeclaredEventKind";
    case errc::unknown_spec: return "UnknownSpec";
    case errc::empty_data: return "EmptyData";
    case errc::non_positive_time: return "NonPositiveTime";
    case errc::beyond_follow_up: return "BeyondFollowUp";
    case errc::q_out_of_range: return "QOutOfRange";
    case errc::undefined_quantile: return "UndefinedQuantile";
    case errc::unknown_cause: return "UnknownCause";
    case errc::single_cause_only: return "SingleCauseOnly";
    case errc::no_events: return "NoEvents";
    case errc::all_one_arm: return "AllOneArm";
    case errc::singular_information: return "SingularInformation";
    case errc::invalid_scenario: return "InvalidScenario";
    case errc::too_few_regimes: return "TooFewRegimes";
    case errc::hr_equals_one: return "HREqualsOne";
    case errc::invalid_probability: return "InvalidProbability";
    case errc::parse_error: return "ParseError";
    case errc::unknown_subject_in_events: return "UnknownSubjectInEvents";
    case errc::io_error: return "IoError";
  }
  return "UnknownError";
}

int errc_exit_code(errc code) {
  switch (code) {
    case errc::empty_data:
    case errc::non_positive_time:
    case errc::beyond_follow_up:
    case errc::q_out_of_range:
    case errc::undefined_quantile:
    case errc::unknown_cause:
    case errc::single_cause_only:
    case errc::no_events:
    case errc::all_one_arm:
    case errc::singular_information:
    case errc::hr_equals_one:
    case errc::invalid_probability:
      return 3;  // numeric failure
    case errc::parse_error:
    case errc::io_error:
      return 4;  // i/o
    default:
      return 2;  // validation
  }
}

}  // namespace tte
