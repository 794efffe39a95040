#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace hhls {

// Shortest fixed-notation text that parses back to the same double.
std::string format_shortest(double value);

// Fixed notation with a given number of fractional digits (no locale, no
// exponent).
std::string format_fixed(double value, int decimals);

// Frequency in Hz rendered as an exact MHz decimal ("102", "8.85316").
std::string format_mhz(std::uint64_t hz);

// Parses a MHz decimal with at most six fractional digits into exact Hz.
bool parse_mhz(std::string_view text, std::uint64_t& hz);

// Parses "<number>[Hz|kHz|MHz|GHz]" into exact Hz.
bool parse_frequency(std::string_view text, std::uint64_t& hz);

bool parse_double(std::string_view text, double& out);
bool parse_u64(std::string_view text, std::uint64_t& out);

std::string_view trim(std::string_view text);

}  // namespace hhls
