// tte: estimand-driven derivation and analysis of time-to-event trial data.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tte/config.hpp"
#include "tte/error.hpp"
#include "tte/estimand.hpp"
#include "tte/io.hpp"
#include "tte/numeric.hpp"
#include "tte/report.hpp"
#include "tte/sim.hpp"
#include "tte/version.hpp"

namespace {

using namespace tte;

EstimandSpec resolve_spec(const std::string& name_or_path) {
  if (is_builtin_spec(name_or_path)) return builtin_spec(name_or_path);
  return parse_spec_file(name_or_path);
}

void emit_output(const Json& report, const std::string& out_path) {
  const std::string text = report.dump();
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
}

struct AnalyzeArgs {
  std::string spec;
  std::string subjects, events, derived;
  double cutoff = -1.0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int permutations = 10000;
  int bootstrap = 0;
  double level = 0.95;
  unsigned threads = 1;
  std::string out;
};

AnalysisOptions make_options(const AnalyzeArgs& args) {
  AnalysisOptions opts;
  if (args.seed_set) opts.seed = args.seed;
  opts.permutations = args.permutations;
  opts.bootstrap_resamples = args.bootstrap;
  opts.level = args.level;
  opts.threads = args.threads;
  if (args.cutoff >= 0) opts.cutoff = args.cutoff;
  return opts;
}

int run(int argc, char** argv) {
  CLI::App app{"estimand-driven time-to-event derivation and analysis"};
  app.set_version_flag("--version", std::string(version::string));
  app.require_subcommand(1);

  // specs
  auto* specs_cmd = app.add_subcommand("specs", "list or show the shipped estimand presets");
  specs_cmd->require_subcommand(1);
  specs_cmd->add_subcommand("list", "list preset names");
  std::string show_name;
  auto* show_cmd = specs_cmd->add_subcommand("show", "print one preset as a config document");
  show_cmd->add_option("name", show_name, "preset name")->required();

  // derive
  AnalyzeArgs d;
  std::string derive_audit;
  auto* derive_cmd =
      app.add_subcommand("derive", "compile a cohort into a derived survival dataset");
  derive_cmd->add_option("--spec", d.spec, "estimand spec (preset name or file)")->required();
  derive_cmd->add_option("--subjects", d.subjects, "subjects table (csv)")->required();
  derive_cmd->add_option("--events", d.events, "events table (csv)")->required();
  derive_cmd->add_option("--cutoff", d.cutoff, "clinical cutoff override (calendar days)");
  derive_cmd->add_option("--out", d.out, "derived dataset output (csv)")->required();
  derive_cmd->add_option("--audit", derive_audit, "derivation audit output (json)");

  // analyze
  AnalyzeArgs a;
  auto* analyze_cmd = app.add_subcommand("analyze", "derive and analyze per an estimand spec");
  analyze_cmd->add_option("--spec", a.spec, "estimand spec (preset name or file)")->required();
  analyze_cmd->add_option("--subjects", a.subjects, "subjects table (csv)");
  analyze_cmd->add_option("--events", a.events, "events table (csv)");
  analyze_cmd->add_option("--derived", a.derived, "already-derived dataset (csv)");
  analyze_cmd->add_option("--cutoff", a.cutoff, "clinical cutoff override (calendar days)");
  auto* seed_opt = analyze_cmd->add_option("--seed", a.seed, "seed for randomized procedures");
  analyze_cmd->add_option("--permutations", a.permutations,
                          "re-randomization permutations (default 10000)");
  analyze_cmd->add_option("--bootstrap", a.bootstrap, "bootstrap resamples (0 = method default)");
  analyze_cmd->add_option("--level", a.level, "confidence level (default 0.95)")
      ->check(CLI::Range(0.5, 0.9999));
  analyze_cmd->add_option("--threads", a.threads, "worker threads (default 1)");
  analyze_cmd->add_option("--out", a.out, "report output (json; default stdout)");

  // simulate
  std::string sim_scenario, sim_subjects_out, sim_events_out;
  std::uint64_t sim_seed = 0;
  auto* sim_cmd = app.add_subcommand("simulate", "simulate a cohort from a scenario file");
  sim_cmd->add_option("--scenario", sim_scenario, "scenario config file")->required();
  auto* sim_seed_opt = sim_cmd->add_option("--seed", sim_seed, "override the scenario seed");
  sim_cmd->add_option("--out-subjects", sim_subjects_out, "subjects table output")->required();
  sim_cmd->add_option("--out-events", sim_events_out, "events table output")->required();

  // experiment
  std::string exp_scenario, exp_regimes, exp_out;
  int exp_reps = 20;
  std::uint64_t exp_seed = 0;
  unsigned exp_threads = 1;
  bool exp_seed_set = false;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "censoring-dependence experiment across cutoff regimes");
  exp_cmd->add_option("--scenario", exp_scenario, "scenario config file")->required();
  exp_cmd->add_option("--regimes", exp_regimes, "comma-separated cutoff regimes")->required();
  exp_cmd->add_option("--reps", exp_reps, "replicates per regime (default 20)");
  auto* exp_seed_opt = exp_cmd->add_option("--seed", exp_seed, "experiment seed");
  exp_cmd->add_option("--threads", exp_threads, "worker threads (default 1)");
  exp_cmd->add_option("--out", exp_out, "report output (json; default stdout)");

  // plan
  double plan_alpha = 0.05, plan_power = 0.8, plan_hr = 0.0, plan_alloc = 1.0;
  auto* plan_cmd = app.add_subcommand("plan", "required event count for a logrank design");
  plan_cmd->add_option("--alpha", plan_alpha, "two-sided alpha (default 0.05)");
  plan_cmd->add_option("--power", plan_power, "power (default 0.8)");
  plan_cmd->add_option("--hr", plan_hr, "alternative hazard ratio")->required();
  plan_cmd->add_option("--allocation", plan_alloc,
                       "experimental:control allocation ratio (default 1)");

  CLI11_PARSE(app, argc, argv);

  if (specs_cmd->parsed()) {
    if (show_cmd->parsed()) {
      std::cout << emit_spec(builtin_spec(show_name));
    } else {
      for (const auto& s : builtin_specs()) {
        std::cout << s.name;
        if (!s.variable.empty()) std::cout << "  (" << s.variable << ")";
        std::cout << "\n";
      }
    }
    return 0;
  }

  if (derive_cmd->parsed()) {
    const EstimandSpec spec = resolve_spec(d.spec);
    Cohort cohort = load_cohort(d.subjects, d.events,
                                d.cutoff >= 0 ? std::optional<double>(d.cutoff) : std::nullopt);
    const DerivedDataset ds = derive_dataset(spec, cohort);
    write_derived_csv(ds, d.out);
    if (!derive_audit.empty()) write_file(derive_audit, derivation_audit(spec, ds).dump());
    std::cerr << "derived " << ds.observations.size() << " observations ("
              << ds.n_excluded_by_population << " excluded by population, "
              << ds.n_excluded_no_origin << " without origin)\n";
    return 0;
  }

  if (analyze_cmd->parsed()) {
    const EstimandSpec spec = resolve_spec(a.spec);
    a.seed_set = seed_opt->count() > 0;
    AnalysisOptions opts = make_options(a);
    if (is_builtin_spec(a.spec))
      opts.input_digests.emplace_back("spec", fnv1a_hex(emit_spec(spec)));
    else
      opts.input_digests.emplace_back("spec", fnv1a_hex(read_file(a.spec)));
    Json report;
    if (!a.derived.empty()) {
      if (!a.subjects.empty() || !a.events.empty())
        fail(errc::parse_error, "pass either --derived or --subjects/--events, not both");
      opts.input_digests.emplace_back("derived", fnv1a_hex(read_file(a.derived)));
      DerivedDataset ds = load_derived_csv(a.derived);
      ds.spec_name = spec.name;
      report = run_analysis_derived(spec, ds, opts);
    } else {
      if (a.subjects.empty() || a.events.empty())
        fail(errc::parse_error, "analyze needs --subjects and --events (or --derived)");
      opts.input_digests.emplace_back("subjects", fnv1a_hex(read_file(a.subjects)));
      opts.input_digests.emplace_back("events", fnv1a_hex(read_file(a.events)));
      const Cohort cohort = load_cohort(a.subjects, a.events);
      report = run_analysis(spec, cohort, opts);
    }
    emit_output(report, a.out);
    return 0;
  }

  if (sim_cmd->parsed()) {
    Scenario scenario = parse_scenario_file(sim_scenario);
    if (sim_seed_opt->count() > 0) scenario.seed = sim_seed;
    const Cohort cohort = simulate_cohort(scenario);
    write_cohort(cohort, sim_subjects_out, sim_events_out);
    std::cerr << "simulated " << cohort.subjects.size() << " subjects\n";
    return 0;
  }

  if (exp_cmd->parsed()) {
    const Scenario scenario = parse_scenario_file(exp_scenario);
    exp_seed_set = exp_seed_opt->count() > 0;
    std::vector<double> regimes;
    for (const auto& part : split(exp_regimes, ','))
      regimes.push_back(parse_number(part, "--regimes"));
    const std::uint64_t seed = exp_seed_set ? exp_seed : scenario.seed;
    const ExperimentReport report =
        censoring_dependence_experiment(scenario, regimes, exp_reps, seed, exp_threads);
    emit_output(experiment_report_json(report), exp_out);
    return 0;
  }

  if (plan_cmd->parsed()) {
    Json j = Json::object();
    j["alpha_two_sided"] = plan_alpha;
    j["power"] = plan_power;
    j["hazard_ratio"] = plan_hr;
    j["allocation_ratio"] = plan_alloc;
    j["required_events"] = plan_events(plan_alpha, plan_power, plan_hr, plan_alloc);
    std::cout << j.dump();
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const tte::Error& e) {
    tte::Json err = tte::Json::object();
    tte::Json inner = tte::Json::object();
    inner["code"] = e.code_name();
    inner["message"] = e.what();
    err["error"] = std::move(inner);
    std::cerr << err.dump();
    return tte::errc_exit_code(e.code());
  } catch (const std::exception& e) {
    tte::Json err = tte::Json::object();
    tte::Json inner = tte::Json::object();
    inner["code"] = "Internal";
    inner["message"] = e.what();
    err["error"] = std::move(inner);
    std::cerr << err.dump();
    return 1;
  }
}
