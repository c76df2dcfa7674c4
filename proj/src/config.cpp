#include "tte/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tte/error.hpp"

namespace tte {

std::string trim(const std::string& text) {
  const char* ws = " \t\r\n";
  auto b = text.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = text.find_last_not_of(ws);
  return text.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  char* end = nullptr;
  double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size())
    fail(errc::parse_error, "expected a number for " + what + ", got '" + t + "'");
  return v;
}

ConfigDoc ConfigDoc::parse(const std::string& text) {
  ConfigDoc doc;
  doc.sections_.push_back({"", {}});  // top-level entries
  Section* current = &doc.sections_.front();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": unterminated section header");
      std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": empty section name");
      doc.sections_.push_back({name, {}});
      current = &doc.sections_.back();
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      fail(errc::parse_error, "line " + std::to_string(lineno) + ": empty key");
    for (const auto& [k, v] : current->entries)
      if (k == key)
        fail(errc::parse_error, "line " + std::to_string(lineno) + ": duplicate key '" + key +
                                    "' in section [" + current->name + "]");
    current->entries.emplace_back(std::move(key), std::move(value));
  }
  return doc;
}

ConfigDoc ConfigDoc::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(errc::io_error, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

const ConfigDoc::Section* ConfigDoc::find(const std::string& name) const {
  for (const auto& s : sections_)
    if (s.name == name) return &s;
  return nullptr;
}

bool ConfigDoc::has_section(const std::string& name) const {
  const Section* s = find(name);
  return s != nullptr && (!s->name.empty() || !s->entries.empty());
}

std::vector<std::string> ConfigDoc::sections_with_prefix(
    const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& s : sections_) {
    if (s.name == prefix ||
        (s.name.size() > prefix.size() && s.name.compare(0, prefix.size(), prefix) == 0 &&
         s.name[prefix.size()] == '.'))
      out.push_back(s.name);
  }
  return out;
}

std::optional<std::string> ConfigDoc::get(const std::string& section,
                                          const std::string& key) const {
  const Section* s = find(section);
  if (!s) return std::nullopt;
  for (const auto& [k, v] : s->entries)
    if (k == key) return v;
  return std::nullopt;
}

std::string ConfigDoc::require(const std::string& section,
                               const std::string& key) const {
  auto v = get(section, key);
  if (!v)
    fail(errc::missing_attribute,
         "missing '" + key + "' in section [" + section + "]");
  return *v;
}

double ConfigDoc::require_number(const std::string& section,
                                 const std::string& key) const {
  return parse_number(require(section, key), "[" + section + "]." + key);
}

std::optional<double> ConfigDoc::get_number(const std::string& section,
                                            const std::string& key) const {
  auto v = get(section, key);
  if (!v) return std::nullopt;
  return parse_number(*v, "[" + section + "]." + key);
}

bool ConfigDoc::get_bool(const std::string& section, const std::string& key,
                         bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  std::string t = trim(*v);
  if (t == "true" || t == "yes" || t == "1") return true;
  if (t == "false" || t == "no" || t == "0") return false;
  fail(errc::parse_error, "[" + section + "]." + key + ": expected a boolean, got '" + t + "'");
}

std::vector<std::pair<std::string, std::string>> ConfigDoc::entries(
    const std::string& section) const {
  const Section* s = find(section);
  if (!s) return {};
  return s->entries;
}

}  // namespace tte
