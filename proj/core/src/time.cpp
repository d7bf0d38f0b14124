#include "qcsc/time.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

#include "qcsc/errors.hpp"

namespace qcsc {

namespace {

constexpr std::int64_t kUnitNs[] = {
    1, 1'000, 1'000'000, 1'000'000'000, 60'000'000'000, 3'600'000'000'000};
constexpr const char* kUnitName[] = {"ns", "us", "ms", "s", "m", "h"};

}  // namespace

Duration parse_duration(const std::string& text) {
  if (text.empty()) raise(ErrorCode::ParseError, "empty duration");
  std::size_t pos = 0;
  while (pos < text.size() &&
         (std::isdigit(static_cast<unsigned char>(text[pos])) ||
          text[pos] == '.' || text[pos] == '-' || text[pos] == '+' ||
          text[pos] == 'e' || text[pos] == 'E')) {
    // 'e' may start a suffix only if not part of an exponent; durations in
    // scenario files never use exponents, so treat a trailing alpha run as
    // the unit.
    if ((text[pos] == 'e' || text[pos] == 'E') &&
        (pos + 1 >= text.size() ||
         !std::isdigit(static_cast<unsigned char>(text[pos + 1])))) {
      break;
    }
    ++pos;
  }
  const std::string number = text.substr(0, pos);
  const std::string unit = text.substr(pos);
  char* end = nullptr;
  const double value = std::strtod(number.c_str(), &end);
  if (number.empty() || end != number.c_str() + number.size()) {
    raise(ErrorCode::ParseError, "bad duration '" + text + "'");
  }
  std::int64_t scale = 1;
  if (!unit.empty()) {
    bool found = false;
    for (std::size_t i = 0; i < std::size(kUnitNs); ++i) {
      if (unit == kUnitName[i]) {
        scale = kUnitNs[i];
        found = true;
        break;
      }
    }
    if (!found) raise(ErrorCode::ParseError, "bad duration unit '" + text + "'");
  }
  return Duration(static_cast<std::int64_t>(
      std::llround(value * static_cast<double>(scale))));
}

std::string format_duration(Duration d) {
  const std::int64_t ns = d.count();
  if (ns == 0) return "0s";
  for (int i = static_cast<int>(std::size(kUnitNs)) - 1; i >= 0; --i) {
    if (ns % kUnitNs[i] == 0) {
      return std::to_string(ns / kUnitNs[i]) + kUnitName[i];
    }
  }
  return std::to_string(ns) + "ns";
}

}  // namespace qcsc
