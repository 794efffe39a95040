#include "hhls/numfmt.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace hhls {

std::string format_shortest(double value) {
  std::array<char, 128> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed);
  return std::string(buf.data(), res.ptr);
}

std::string format_fixed(double value, int decimals) {
  if (value == 0.0) value = 0.0;  // normalise -0
  std::array<char, 128> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed,
                           decimals);
  std::string out(buf.data(), res.ptr);
  if (out.starts_with('-') && out.find_first_not_of("-0.") == std::string::npos) out.erase(0, 1);
  return out;
}

std::string format_mhz(std::uint64_t hz) {
  std::string out = std::to_string(hz / 1000000);
  std::uint64_t frac = hz % 1000000;
  if (frac == 0) return out;
  std::string digits = std::to_string(frac);
  digits.insert(0, 6 - digits.size(), '0');
  while (digits.back() == '0') digits.pop_back();
  return out + "." + digits;
}

namespace {

// Parses an unsigned decimal scaled by 10^exp into an exact integer.
bool parse_scaled(std::string_view text, int exp, std::uint64_t& out) {
  text = trim(text);
  if (text.empty()) return false;
  std::uint64_t whole = 0;
  std::uint64_t frac = 0;
  int frac_digits = 0;
  bool point = false;
  bool any = false;
  for (char c : text) {
    if (c == '.') {
      if (point) return false;
      point = true;
      continue;
    }
    if (c < '0' || c > '9') return false;
    any = true;
    if (point) {
      if (++frac_digits > exp) return false;
      frac = frac * 10 + static_cast<std::uint64_t>(c - '0');
    } else {
      if (whole > (UINT64_MAX - 9) / 10) return false;
      whole = whole * 10 + static_cast<std::uint64_t>(c - '0');
    }
  }
  if (!any) return false;
  std::uint64_t scale = 1;
  for (int i = 0; i < exp; ++i) scale *= 10;
  for (int i = frac_digits; i < exp; ++i) frac *= 10;
  if (whole > (UINT64_MAX - frac) / scale) return false;
  out = whole * scale + frac;
  return true;
}

}  // namespace

bool parse_mhz(std::string_view text, std::uint64_t& hz) { return parse_scaled(text, 6, hz); }

bool parse_frequency(std::string_view text, std::uint64_t& hz) {
  text = trim(text);
  std::size_t split = 0;
  while (split < text.size() && (text[split] == '.' || (text[split] >= '0' && text[split] <= '9')))
    ++split;
  std::string_view unit = trim(text.substr(split));
  int exp = 0;
  if (unit.empty() || unit == "Hz" || unit == "hz") exp = 0;
  else if (unit == "kHz" || unit == "khz") exp = 3;
  else if (unit == "MHz" || unit == "mhz") exp = 6;
  else if (unit == "GHz" || unit == "ghz") exp = 9;
  else return false;
  return parse_scaled(text.substr(0, split), exp, hz);
}

bool parse_double(std::string_view text, double& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size() && std::isfinite(out);
}

bool parse_u64(std::string_view text, std::uint64_t& out) {
  text = trim(text);
  if (text.empty()) return false;
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

std::string_view trim(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t' || text.front() == '\r' ||
                           text.front() == '\n'))
    text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r' ||
                           text.back() == '\n'))
    text.remove_suffix(1);
  return text;
}

}  // namespace hhls
