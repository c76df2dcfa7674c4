#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tte {

// Canonical event kinds. The vocabulary is open: unknown kinds are legal in
// raw timelines and only constrained when an estimand spec is compiled.
namespace kinds {
inline constexpr const char* pd = "PD";
inline constexpr const char* death = "death";
inline constexpr const char* nalt = "NALT";
inline constexpr const char* dropout = "dropout";
inline constexpr const char* withdrawal = "withdrawal";
inline constexpr const char* response_assessment = "response_assessment";
inline constexpr const char* cr = "CR";
inline constexpr const char* pr = "PR";
inline constexpr const char* treatment_discontinuation = "treatment_discontinuation";
inline constexpr const char* failure_to_respond = "failure_to_respond";
inline constexpr const char* missed_assessment = "missed_assessment";
}  // namespace kinds

namespace arms {
inline constexpr const char* control = "control";
inline constexpr const char* experimental = "experimental";
}  // namespace arms

// A typed, timed clinical event. Time is in days since the subject's time
// origin (randomisation).
struct ClinicalEvent {
  std::string kind;
  double time = 0.0;
};

// Raw per-subject event log plus the attributes analyses filter and
// stratify on. Immutable once validated.
struct SubjectTimeline {
  std::string subject_id;
  std::string arm;  // "control" | "experimental"
  std::map<std::string, std::string> strata;
  double entry_calendar_time = 0.0;  // days from trial start to randomisation
  std::vector<ClinicalEvent> events;  // non-decreasing by time after validation
  std::map<std::string, double> covariates;

  // Set by apply_clinical_cutoff: days of observation from randomisation to
  // the clinical cutoff.
  std::optional<double> admin_horizon;
};

struct Cohort {
  std::vector<SubjectTimeline> subjects;
  double cutoff_calendar_time = 0.0;
};

// Sorts events (stable) and verifies the timeline invariants: finite
// non-negative times, non-empty kinds and arm label, death terminal and
// unique. Throws Error naming the offending subject and event.
SubjectTimeline validate_timeline(SubjectTimeline subject);

// Drops events beyond the per-subject administrative horizon
// cutoff - entry and records the horizon on the returned timeline.
SubjectTimeline apply_clinical_cutoff(SubjectTimeline subject,
                                      double cutoff_calendar_time);

// Validates every subject and checks cohort-level invariants (unique ids,
// cutoff after first entry).
Cohort validate_cohort(Cohort cohort);

}  // namespace tte
