#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tte {

// Nested key-value configuration document: INI-style sections with
// `key = value` entries, `#` comments. Section and key names may be dotted
// (e.g. [intercurrent.NALT], hazard.control). This one format carries both
// estimand specs and simulation scenarios.
class ConfigDoc {
 public:
  static ConfigDoc parse(const std::string& text);
  static ConfigDoc parse_file(const std::string& path);

  bool has_section(const std::string& name) const;
  // Sections in document order whose name is `prefix` or starts with
  // `prefix.`.
  std::vector<std::string> sections_with_prefix(const std::string& prefix) const;

  std::optional<std::string> get(const std::string& section,
                                 const std::string& key) const;
  std::string require(const std::string& section, const std::string& key) const;
  double require_number(const std::string& section, const std::string& key) const;
  std::optional<double> get_number(const std::string& section,
                                   const std::string& key) const;
  bool get_bool(const std::string& section, const std::string& key,
                bool fallback) const;

  // All keys of a section in document order.
  std::vector<std::pair<std::string, std::string>> entries(
      const std::string& section) const;

 private:
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;
  };
  std::vector<Section> sections_;
  const Section* find(const std::string& name) const;
};

// Value parsing helpers shared by config and CSV readers.
double parse_number(const std::string& text, const std::string& what);
std::vector<std::string> split(const std::string& text, char sep);
std::string trim(const std::string& text);

}  // namespace tte
