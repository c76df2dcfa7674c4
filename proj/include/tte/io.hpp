#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tte/estimand.hpp"
#include "tte/event_model.hpp"
#include "tte/report.hpp"
#include "tte/sim.hpp"

namespace tte {

// Subjects table: subject_id, arm, entry_calendar_time, stratum.<name>...,
// cov.<name>... Events table: subject_id, kind, time. Comma-separated text
// with a header row, '.' decimal separator.
Cohort load_cohort(const std::string& subjects_path, const std::string& events_path,
                   std::optional<double> cutoff_override = std::nullopt);

void write_cohort(const Cohort& cohort, const std::string& subjects_path,
                  const std::string& events_path);

// Derived dataset round-trip: subject_id, arm, time, status, cause,
// stratum.<name>...
void write_derived_csv(const DerivedDataset& ds, const std::string& path);
DerivedDataset load_derived_csv(const std::string& path);

// Full derivation audit (observations with their derivation logs).
Json derivation_audit(const EstimandSpec& spec, const DerivedDataset& ds);

struct AnalysisOptions {
  std::optional<std::uint64_t> seed;  // required for randomized procedures
  int permutations = 10000;           // rerandomization gatekeeper
  int bootstrap_resamples = 0;        // 0 = per-method defaults
  double level = 0.95;
  unsigned threads = 1;
  // Echoed into the report for provenance.
  std::vector<std::pair<std::string, std::string>> input_digests;
  std::optional<double> cutoff;
};

// Derivation + gatekeeper test + effect estimates, serialized into one
// deterministic report.
Json run_analysis(const EstimandSpec& spec, const Cohort& cohort,
                  const AnalysisOptions& opts);

// Analysis of an already-derived dataset (skips derivation; round-trips the
// `derive` output).
Json run_analysis_derived(const EstimandSpec& spec, const DerivedDataset& ds,
                          const AnalysisOptions& opts);

// Required event count for a two-sided logrank test (normal-approximation
// event formula): d = ceil((z_{1-a/2} + z_pow)^2 / (p(1-p) ln^2 HR)) with p
// the experimental allocation fraction.
int plan_events(double alpha_two_sided, double power, double hazard_ratio,
                double allocation_ratio);

Json experiment_report_json(const ExperimentReport& report);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tte
