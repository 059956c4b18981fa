#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace cdm::detail {

/// Fixed-point text with a given number of decimals. Negative zero prints
/// as zero so emitted files do not flip between "-0.000000" and "0.000000".
inline std::string fixed(double value, int decimals) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*f", decimals, value);
  std::string text(buffer);
  if (text.front() == '-' && text.find_first_not_of("-0.") == std::string::npos) {
    text.erase(0, 1);
  }
  return text;
}

/// Shortest-ish general format used by XML/JSON-adjacent emitters.
inline std::string general(double value, int digits = 10) {
  if (value == 0.0) return "0";
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.*g", digits, value);
  return buffer;
}

}  // namespace cdm::detail
