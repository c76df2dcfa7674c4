#include "tte/event_model.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "tte/error.hpp"

namespace tte {

namespace {

std::string event_ref(const SubjectTimeline& s, const ClinicalEvent& e) {
  return "subject '" + s.subject_id + "', event (" + e.kind + ", " +
         std::to_string(e.time) + ")";
}

}  // namespace

SubjectTimeline validate_timeline(SubjectTimeline subject) {
  if (subject.arm.empty())
    fail(errc::empty_arm_label, "subject '" + subject.subject_id + "' has an empty arm label");
  if (!(subject.entry_calendar_time >= 0) || !std::isfinite(subject.entry_calendar_time))
    fail(errc::negative_time, "subject '" + subject.subject_id +
                                  "' has a negative or non-finite entry time");

  std::stable_sort(subject.events.begin(), subject.events.end(),
                   [](const ClinicalEvent& a, const ClinicalEvent& b) {
                     return a.time < b.time;
                   });

  bool death_seen = false;
  double death_time = 0.0;
  for (const auto& e : subject.events) {
    if (e.kind.empty())
      fail(errc::parse_error, "subject '" + subject.subject_id + "' has an event with empty kind");
    if (!(e.time >= 0) || !std::isfinite(e.time))
      fail(errc::negative_time, event_ref(subject, e) + " has a negative or non-finite time");
    if (e.kind == kinds::death && death_seen)
      fail(errc::duplicate_death, event_ref(subject, e) + " is a second death event");
    if (death_seen && e.time > death_time)
      fail(errc::event_after_death, event_ref(subject, e) + " occurs after death");
    if (e.kind == kinds::death) {
      death_seen = true;
      death_time = e.time;
    }
  }
  return subject;
}

SubjectTimeline apply_clinical_cutoff(SubjectTimeline subject,
                                      double cutoff_calendar_time) {
  if (cutoff_calendar_time < subject.entry_calendar_time)
    fail(errc::cutoff_before_entry,
         "subject '" + subject.subject_id + "' entered at " +
             std::to_string(subject.entry_calendar_time) + ", after the cutoff " +
             std::to_string(cutoff_calendar_time));
  const double horizon = cutoff_calendar_time - subject.entry_calendar_time;
  std::erase_if(subject.events,
                [horizon](const ClinicalEvent& e) { return e.time > horizon; });
  subject.admin_horizon = horizon;
  return subject;
}

Cohort validate_cohort(Cohort cohort) {
  std::set<std::string> ids;
  double min_entry = cohort.subjects.empty() ? 0.0 : cohort.subjects.front().entry_calendar_time;
  for (auto& s : cohort.subjects) {
    s = validate_timeline(std::move(s));
    if (!ids.insert(s.subject_id).second)
      fail(errc::parse_error, "duplicate subject_id '" + s.subject_id + "'");
    min_entry = std::min(min_entry, s.entry_calendar_time);
  }
  if (!cohort.subjects.empty() && !(cohort.cutoff_calendar_time > min_entry))
    fail(errc::cutoff_before_entry,
         "cutoff_calendar_time must fall after the earliest randomisation");
  return cohort;
}

}  // namespace tte
