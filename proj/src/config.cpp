#include "hhls/config.hpp"

#include <sstream>

#include "hhls/error.hpp"
#include "hhls/numfmt.hpp"

namespace hhls {

KeyValueConfig KeyValueConfig::parse(std::string_view text, const std::string& origin) {
  KeyValueConfig cfg;
  cfg.origin_ = origin;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::string section;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string at = origin + ":" + std::to_string(lineno) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') fail(at + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) fail(at + "empty section name");
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(at + "expected 'key = value'");
    std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) fail(at + "missing key");
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    cfg.values_[key] = std::string(value);
    cfg.lines_[key] = lineno;
  }
  return cfg;
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
  values_[key] = value;
  lines_[key] = 0;
}

int KeyValueConfig::line_of(const std::string& key) const {
  auto it = lines_.find(key);
  return it == lines_.end() ? 0 : it->second;
}

std::string KeyValueConfig::where(const std::string& key) const {
  const int line = line_of(key);
  return line > 0 ? origin_ + ":" + std::to_string(line) + ": " : origin_ + ": ";
}

}  // namespace hhls
