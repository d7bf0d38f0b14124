#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "qcsc/time.hpp"

namespace qcsc::telemetry {

enum class MetricKind { Counter, Gauge };

struct Sample {
  VTime t{0};
  double value = 0.0;
};

using Labels = std::map<std::string, std::string>;

struct Series {
  MetricKind kind = MetricKind::Gauge;
  Labels labels;
  std::vector<Sample> samples;
};

struct ParsedSample {
  std::string name;
  MetricKind kind;
  Labels labels;
  double value;
  std::int64_t timestamp_ms;
};

// Virtual-time-stamped metrics registry. Counter series must be
// non-decreasing; names match [a-z0-9_.]+. Concurrent observers are
// supported; appends are serialized per registry.
class MetricsRegistry {
 public:
  // Errors: InvalidName (bad name, or name rebound to a different kind),
  // CounterRegression.
  void observe(const std::string& name, MetricKind kind, const Labels& labels,
               double value, VTime t);

  // Latest sample per (name, labels) series:
  //   # TYPE <name> counter|gauge
  //   name{label="v",...} value timestamp_ms
  // Lexicographic ordering by name then labels; byte-stable across replays.
  std::string export_text() const;

  // Latest sample of one series, if present.
  const Sample* latest(const std::string& name, const Labels& labels) const;
  std::vector<std::pair<std::string, Series>> snapshot() const;

  bool empty() const;

 private:
  mutable std::mutex mu_;
  // name -> serialized labels -> series
  std::map<std::string, std::map<std::string, Series>> series_;
};

// Parses an exposition document back into latest samples (test support for
// the round-trip invariant).
std::vector<ParsedSample> parse_exposition(const std::string& text);

// Busy-interval bookkeeping behind the qpu_saturation operation.
class BusyTracker {
 public:
  void add_busy(const std::string& resource, VTime start, VTime end);
  // Busy fraction of [w_start, w_end); throws EmptyWindow when w_end <=
  // w_start. Unknown resources are simply idle.
  double saturation(const std::string& resource, VTime w_start, VTime w_end) const;
  Duration busy_in(const std::string& resource, VTime w_start, VTime w_end) const;

 private:
  mutable std::mutex mu_;
  std::map<std::string, std::vector<std::pair<VTime, VTime>>> intervals_;
};

std::string format_metric_value(double value);

}  // namespace qcsc::telemetry
