#include "tte/report.hpp"

#include <cmath>
#include <cstdio>

namespace tte {

Json& Json::operator[](const std::string& key) {
  type_ = Type::object;
  return fields_[key];
}

void Json::push_back(Json value) {
  type_ = Type::array;
  items_.push_back(std::move(value));
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  out += buf;
}

}  // namespace

void Json::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  const std::string closepad(static_cast<std::size_t>(indent) * depth, ' ');
  switch (type_) {
    case Type::null: out += "null"; break;
    case Type::boolean: out += bool_ ? "true" : "false"; break;
    case Type::number: write_number(out, num_); break;
    case Type::integer: {
      char buf[24];
      std::snprintf(buf, sizeof buf, "%lld", int_);
      out += buf;
      break;
    }
    case Type::string: write_escaped(out, str_); break;
    case Type::array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        out += pad;
        items_[i].write(out, indent, depth + 1);
        if (i + 1 < items_.size()) out.push_back(',');
        out.push_back('\n');
      }
      out += closepad + "]";
      break;
    }
    case Type::object: {
      if (fields_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : fields_) {
        out += pad;
        write_escaped(out, key);
        out += ": ";
        value.write(out, indent, depth + 1);
        if (++i < fields_.size()) out.push_back(',');
        out.push_back('\n');
      }
      out += closepad + "}";
      break;
    }
  }
}

std::string Json::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out.push_back('\n');
  return out;
}

}  // namespace tte
