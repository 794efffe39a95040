#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hhls {

// Flat key-value configuration: "key = value" lines, '#' comments, optional
// "[section]" headers that prefix following keys with "section.". Values may
// be double-quoted. Later assignments override earlier ones.
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::string_view text, const std::string& origin = "<config>");

  std::optional<std::string> get(const std::string& key) const;
  void set(const std::string& key, const std::string& value);
  bool contains(const std::string& key) const { return values_.count(key) != 0; }

  // Keys in sorted order.
  const std::map<std::string, std::string>& values() const { return values_; }
  // Line a key was read from (0 for values set programmatically).
  int line_of(const std::string& key) const;
  const std::string& origin() const { return origin_; }

  // "origin:line: message" for a key, used in error reports.
  std::string where(const std::string& key) const;

 private:
  std::string origin_ = "<config>";
  std::map<std::string, std::string> values_;
  std::map<std::string, int> lines_;
};

}  // namespace hhls
