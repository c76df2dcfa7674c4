#include <map>

#include "tte/error.hpp"
#include "tte/estimand.hpp"

namespace tte {

namespace {

// Presets are kept in the spec grammar itself: the parser is the single
// source of their semantics and the documents double as format examples.

std::string dlbcl(int option, const char* variable, const char* nalt,
                  const char* failure_to_respond, const char* comment) {
  std::string text = "name = dlbcl_option_" + std::to_string(option) + "\n";
  text += std::string("variable = ") + variable + "\n";
  text += std::string("description = ") + comment + "\n";
  text += "\n[population]\n";  // DLBCL patients, defined by in-/exclusion criteria
  text += "\n[variable]\norigin = randomisation\nendpoint_events = PD\n";
  text += "censor_at_last_assessment = true\n";
  text += "\n[intercurrent.NALT]\nstrategy = " + std::string(nalt) + "\n";
  text += "\n[intercurrent.failure_to_respond]\nstrategy = " +
          std::string(failure_to_respond) + "\n";
  text +=
      "\n[intercurrent.death]\nstrategy = composite\n"
      "\n[intercurrent.response_assessment]\nstrategy = treatment_policy\n"
      "\n[intercurrent.CR]\nstrategy = treatment_policy\n"
      "\n[intercurrent.PR]\nstrategy = treatment_policy\n"
      "\n[summary]\nmeasure = cox_hr\ngatekeeper = logrank\n";
  return text;
}

constexpr const char* kGalliumSummary =
    "\n[summary]\nmeasure = cox_hr\nstratified = true\ngatekeeper = stratified_logrank\n";

// GALLIUM intervention effect: NALT treatment policy, drop-out and withdrawal
// hypothetical, death composite, bookkeeping kinds ignored; overrides adjust
// or (with an empty body) drop single rules per preset.
std::string gallium(const std::string& name, const std::string& variable,
                    const std::string& description, const std::string& origin,
                    const std::string& endpoint_events,
                    const std::map<std::string, std::string>& overrides,
                    const std::string& summary,
                    bool censor_at_last_assessment = true) {
  std::map<std::string, std::string> rules = {
      {"NALT", "strategy = treatment_policy"},
      {"dropout", "strategy = hypothetical"},
      {"withdrawal", "strategy = hypothetical"},
      {"death", "strategy = composite"},
      {"treatment_discontinuation", "strategy = treatment_policy"},
      {"response_assessment", "strategy = treatment_policy"},
      {"CR", "strategy = treatment_policy"},
      {"PR", "strategy = treatment_policy"},
      {"missed_assessment", "strategy = treatment_policy"},
  };
  for (const auto& [kind, body] : overrides) {
    if (body.empty())
      rules.erase(kind);
    else
      rules[kind] = body;
  }

  std::string text = "name = " + name + "\nvariable = " + variable + "\n";
  if (!description.empty()) text += "description = " + description + "\n";
  text += "\n[population]\n";  // FL patients, defined by in-/exclusion criteria
  text += "\n[variable]\norigin = " + origin + "\nendpoint_events = " + endpoint_events + "\n";
  if (censor_at_last_assessment) text += "censor_at_last_assessment = true\n";
  for (const auto& [kind, body] : rules)
    text += "\n[intercurrent." + kind + "]\n" + body + "\n";
  text += summary;
  return text;
}

std::vector<EstimandSpec> build_all() {
  std::vector<std::string> texts;

  texts.push_back(dlbcl(1, "PFS", "treatment_policy", "treatment_policy",
                        "PFS with every intercurrent event ignored (Fleming-style definition)"));
  texts.push_back(dlbcl(2, "PFS", "hypothetical", "treatment_policy",
                        "PFS imagining NALT away (censor at NALT)"));
  texts.push_back(dlbcl(3, "PFS", "treatment_policy", "hypothetical",
                        "PFS censoring at failure to respond (Cheson-style definition)"));
  texts.push_back(dlbcl(4, "PFS", "hypothetical", "hypothetical",
                        "PFS censoring at both NALT and failure to respond"));
  texts.push_back(dlbcl(5, "EFS", "composite", "hypothetical",
                        "PFS becomes EFS: NALT counts as an event"));

  texts.push_back(gallium(
      "gallium_primary", "Inv-PFS",
      "investigator-assessed PFS; HR and logrank stratified by chemotherapy and FLIPI1",
      "randomisation", "PD", {}, kGalliumSummary));
  texts.push_back(gallium(
      "gallium_supp_1", "Inv-PFS",
      "worst case for withdrawals: event for experimental, censored for control",
      "randomisation", "PD",
      {{"withdrawal", "strategy = hypothetical\narm_override.experimental = composite"}},
      kGalliumSummary));
  texts.push_back(gallium(
      "gallium_supp_2", "Inv-PFS",
      "missed assessment prior to PD or cutoff counted as an event (recorded the day after "
      "the last response assessment)",
      "randomisation", "PD", {{"missed_assessment", "strategy = composite"}},
      kGalliumSummary));
  texts.push_back(gallium("gallium_supp_3", "Inv-PFS",
                          "NALT prior to PD censored (hypothetical)", "randomisation", "PD",
                          {{"NALT", "strategy = hypothetical"}}, kGalliumSummary));
  texts.push_back(gallium(
      "gallium_supp_4", "Inv-PFS",
      "treatment discontinuation for reasons other than PD or death counted as an event",
      "randomisation", "PD", {{"treatment_discontinuation", "strategy = composite"}},
      kGalliumSummary));
  texts.push_back(gallium(
      "gallium_supp_5", "Inv-PFS",
      "death 6+ months after the last response assessment censored at that assessment",
      "randomisation", "PD", {{"death", "strategy = composite\nstale_censor_gap = 182.625"}},
      kGalliumSummary));

  texts.push_back(gallium(
      "gallium_os", "OS",
      "overall survival; censored at the clinical cutoff (date last known alive)",
      "randomisation", "death",
      {{"death", ""}, {"PD", "strategy = treatment_policy"}},
      kGalliumSummary, /*censor_at_last_assessment=*/false));

  texts.push_back(gallium(
      "gallium_ttnalt", "TTNALT", "time from randomisation to NALT or death",
      "randomisation", "",
      {{"NALT", "strategy = composite"},
       {"death", "strategy = composite"},
       {"PD", "strategy = treatment_policy"}},
      kGalliumSummary, /*censor_at_last_assessment=*/false));

  texts.push_back(gallium("gallium_efs", "EFS",
                          "time from randomisation to Inv-PFS event or NALT",
                          "randomisation", "PD", {{"NALT", "strategy = composite"}},
                          kGalliumSummary));

  const char* kNoGatekeeperSummary = "\n[summary]\nmeasure = cox_hr\nstratified = true\n";
  texts.push_back(gallium(
      "gallium_dfs", "DFS",
      "time from first CR to Inv-PFS event; non-randomized comparison, no hypothesis test",
      "CR", "PD", {{"CR", ""}}, kNoGatekeeperSummary));
  texts.push_back(gallium(
      "gallium_dor", "DOR",
      "time from first CR or PR to Inv-PFS event; non-randomized comparison, no hypothesis test",
      "CR, PR", "PD", {{"CR", ""}, {"PR", ""}}, kNoGatekeeperSummary));

  std::vector<EstimandSpec> specs;
  specs.reserve(texts.size());
  for (const auto& t : texts) specs.push_back(parse_spec(t));
  return specs;
}

}  // namespace

const std::vector<EstimandSpec>& builtin_specs() {
  static const std::vector<EstimandSpec> specs = build_all();
  return specs;
}

const EstimandSpec& builtin_spec(const std::string& name) {
  for (const auto& s : builtin_specs())
    if (s.name == name) return s;
  fail(errc::unknown_spec, "no builtin spec named '" + name + "'");
}

bool is_builtin_spec(const std::string& name) {
  for (const auto& s : builtin_specs())
    if (s.name == name) return true;
  return false;
}

}  // namespace tte
