#include "hhls/rational.hpp"

#include <cstdlib>
#include <numeric>

#include "hhls/error.hpp"

namespace hhls {

namespace {

using Wide = __int128;

Wide wide_gcd(Wide a, Wide b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    Wide t = a % b;
    a = b;
    b = t;
  }
  return a;
}

Rational make(Wide num, Wide den) {
  if (den == 0) fail("rational division by zero");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  Wide g = wide_gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  constexpr Wide kMax = INT64_MAX;
  if (num > kMax || num < -kMax || den > kMax) fail("rational overflow");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
  if (den == 0) fail("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  std::int64_t g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational operator+(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  return make(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  Wide l = Wide(a.num_) * b.den_;
  Wide r = Wide(b.num_) * a.den_;
  if (l < r) return std::strong_ordering::less;
  if (l > r) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::int64_t Rational::floor() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ < 0) --q;
  return q;
}

std::int64_t Rational::ceil() const {
  std::int64_t q = num_ / den_;
  if (num_ % den_ != 0 && num_ > 0) ++q;
  return q;
}

Rational lcm(const Rational& a, const Rational& b) {
  // lcm(p1/q1, p2/q2) = lcm(p1, p2) / gcd(q1, q2) for reduced positive fractions.
  if (!a.is_positive() || !b.is_positive()) fail("lcm of non-positive rationals");
  Wide g = wide_gcd(a.num(), b.num());
  Wide num = Wide(a.num()) / g * b.num();
  return make(num, std::gcd(a.den(), b.den()));
}

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    i = 1;
  }
  Wide num = 0;
  Wide den = 1;
  bool digits = false;
  bool point = false;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c == '.') {
      if (point) return std::nullopt;
      point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    digits = true;
    num = num * 10 + (c - '0');
    if (point) den *= 10;
    if (num > Wide(INT64_MAX) || den > Wide(INT64_MAX)) return std::nullopt;
  }
  if (!digits) return std::nullopt;
  try {
    return make(negative ? -num : num, den);
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::optional<Rational> unit_seconds(std::string_view unit) {
  if (unit == "s") return Rational(1);
  if (unit == "ms") return Rational(1, 1000);
  if (unit == "us") return Rational(1, 1000000);
  if (unit == "ns") return Rational(1, 1000000000);
  return std::nullopt;
}

std::optional<Rational> parse_duration(std::string_view text) {
  std::size_t split = 0;
  while (split < text.size() &&
         (text[split] == '-' || text[split] == '+' || text[split] == '.' ||
          (text[split] >= '0' && text[split] <= '9')))
    ++split;
  auto value = parse_decimal(text.substr(0, split));
  std::string_view unit = text.substr(split);
  while (!unit.empty() && unit.front() == ' ') unit.remove_prefix(1);
  auto scale = unit_seconds(unit);
  if (!value || !scale) return std::nullopt;
  try {
    return *value * *scale;
  } catch (const Error&) {
    return std::nullopt;
  }
}

std::string to_decimal(const Rational& value) {
  std::string out;
  Wide num = value.num();
  Wide den = value.den();
  if (num < 0) {
    out.push_back('-');
    num = -num;
  }
  Wide whole = num / den;
  Wide rem = num % den;
  out += std::to_string(static_cast<long long>(whole));
  if (rem == 0) return out;
  out.push_back('.');
  for (int digits = 0; rem != 0 && digits < 12; ++digits) {
    rem *= 10;
    out.push_back(static_cast<char>('0' + static_cast<int>(rem / den)));
    rem %= den;
  }
  return out;
}

std::string format_duration(const Rational& seconds) {
  static constexpr std::pair<const char*, std::int64_t> kUnits[] = {
      {"s", 1}, {"ms", 1000}, {"us", 1000000}, {"ns", 1000000000}};
  for (auto [unit, scale] : kUnits) {
    Rational scaled = seconds * Rational(scale);
    if (scaled.den() == 1) return std::to_string(scaled.num()) + " " + unit;
  }
  return to_decimal(seconds * Rational(1000000000)) + " ns";
}

}  // namespace hhls
