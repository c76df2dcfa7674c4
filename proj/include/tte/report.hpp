#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace tte {

// Report value tree. Objects keep keys sorted and numbers print with 15
// significant digits, so serialized reports are byte-stable and suitable for
// golden-file comparison.
class Json {
 public:
  Json() = default;
  Json(bool b) : type_(Type::boolean), bool_(b) {}
  Json(double d) : type_(Type::number), num_(d) {}
  Json(int i) : type_(Type::integer), int_(i) {}
  Json(long long i) : type_(Type::integer), int_(i) {}
  Json(std::uint64_t i) : type_(Type::integer), int_(static_cast<long long>(i)) {}
  Json(const char* s) : type_(Type::string), str_(s) {}
  Json(std::string s) : type_(Type::string), str_(std::move(s)) {}

  static Json object() {
    Json j;
    j.type_ = Type::object;
    return j;
  }
  static Json array() {
    Json j;
    j.type_ = Type::array;
    return j;
  }
  template <typename It>
  static Json array_of(It begin, It end) {
    Json j = array();
    for (It it = begin; it != end; ++it) j.push_back(Json(*it));
    return j;
  }

  Json& operator[](const std::string& key);  // object access, creates entries
  void push_back(Json value);                // array append
  bool is_null() const { return type_ == Type::null; }

  std::string dump(int indent = 2) const;

 private:
  enum class Type { null, boolean, number, integer, string, array, object };
  Type type_ = Type::null;
  bool bool_ = false;
  double num_ = 0.0;
  long long int_ = 0;
  std::string str_;
  std::vector<Json> items_;
  std::map<std::string, Json> fields_;

  void write(std::string& out, int indent, int depth) const;
};

}  // namespace tte
