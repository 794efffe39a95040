#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace hhls {

// Exact rational number with a positive denominator, kept in lowest terms.
// Used for real-time quantities (seconds) so that time-to-cycle conversion
// never accumulates binary floating point drift.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num, std::int64_t den = 1);

  std::int64_t num() const noexcept { return num_; }
  std::int64_t den() const noexcept { return den_; }

  double to_double() const noexcept {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  bool is_zero() const noexcept { return num_ == 0; }
  bool is_positive() const noexcept { return num_ > 0; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  Rational operator-() const { return Rational(-num_, den_); }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

  // floor / ceil of the value as integers.
  std::int64_t floor() const;
  std::int64_t ceil() const;

 private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

// Least common multiple of two positive rationals (smallest positive value that
// is an integer multiple of both).
Rational lcm(const Rational& a, const Rational& b);

// Parses an exact decimal such as "12", "-0.5", "3.125".
std::optional<Rational> parse_decimal(std::string_view text);

// Parses a duration literal "<decimal> <unit>" or "<decimal><unit>" with unit in
// {ns, us, ms, s}; returns seconds.
std::optional<Rational> parse_duration(std::string_view text);

// Scale of a duration unit in seconds, or nullopt for an unknown unit.
std::optional<Rational> unit_seconds(std::string_view unit);

// Exact decimal rendering when the denominator only has factors 2 and 5,
// otherwise rounded to 12 fractional digits.
std::string to_decimal(const Rational& value);

// Canonical duration text: the largest unit in {s, ms, us, ns} that gives an
// integer, else a decimal count of nanoseconds. Always "<number> <unit>".
std::string format_duration(const Rational& seconds);

}  // namespace hhls
