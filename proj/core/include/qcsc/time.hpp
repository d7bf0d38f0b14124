#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace qcsc {

// All simulation time is integer nanoseconds of virtual time.
using Duration = std::chrono::nanoseconds;
using VTime = std::chrono::nanoseconds;  // virtual time since simulation epoch

inline constexpr double to_seconds(Duration d) {
  return static_cast<double>(d.count()) * 1e-9;
}

inline constexpr std::int64_t to_millis_floor(VTime t) {
  return t.count() / 1'000'000;
}

// Accepts "250ns", "10us", "1.5ms", "2s", "5m", "1h" or a bare integer (ns).
Duration parse_duration(const std::string& text);

// Exact rendering with the largest unit that divides evenly ("1ms", "1500us").
std::string format_duration(Duration d);

}  // namespace qcsc
