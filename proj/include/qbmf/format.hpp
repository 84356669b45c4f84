#pragma once

// Locale-independent number formatting for reports and CSV output.

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

namespace qbmf {

/// Shortest decimal string that reads back to the same double.
inline std::string format_shortest(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// x rounded to `digits` significant digits, trailing zeros removed.
inline std::string format_significant(double x, int digits) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, digits);
  return std::string(buf, res.ptr);
}

}  // namespace qbmf
