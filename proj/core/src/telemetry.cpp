#include "qcsc/telemetry/registry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "qcsc/errors.hpp"

namespace qcsc::telemetry {

namespace {

bool valid_metric_name(const std::string& name) {
  if (name.empty()) return false;
  for (const char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
                    c == '_' || c == '.';
    if (!ok) return false;
  }
  return true;
}

bool valid_label_part(const std::string& text) {
  for (const char c : text) {
    if (c == '"' || c == '\\' || c == '\n' || c == ',' || c == '=' ||
        c == '{' || c == '}') {
      return false;
    }
  }
  return true;
}

std::string serialize_labels(const Labels& labels) {
  if (labels.empty()) return {};
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : labels) {
    if (!first) out += ',';
    first = false;
    out += k;
    out += "=\"";
    out += v;
    out += '"';
  }
  out += '}';
  return out;
}

}  // namespace

std::string format_metric_value(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

void MetricsRegistry::observe(const std::string& name, MetricKind kind,
                              const Labels& labels, double value, VTime t) {
  if (!valid_metric_name(name)) {
    raise(ErrorCode::InvalidName, "metric name '" + name + "'");
  }
  for (const auto& [k, v] : labels) {
    if (!valid_label_part(k) || !valid_label_part(v)) {
      raise(ErrorCode::InvalidName, "metric label '" + k + "' of " + name);
    }
  }
  std::lock_guard<std::mutex> lock(mu_);
  auto& by_labels = series_[name];
  const std::string key = serialize_labels(labels);
  auto it = by_labels.find(key);
  if (it == by_labels.end()) {
    it = by_labels.emplace(key, Series{kind, labels, {}}).first;
  } else if (it->second.kind != kind) {
    raise(ErrorCode::InvalidName,
          "metric '" + name + "' rebound to a different kind");
  }
  Series& s = it->second;
  if (kind == MetricKind::Counter && !s.samples.empty() &&
      value < s.samples.back().value) {
    raise(ErrorCode::CounterRegression,
          "counter '" + name + key + "' " +
              format_metric_value(s.samples.back().value) + " -> " +
              format_metric_value(value));
  }
  s.samples.push_back(Sample{t, value});
}

std::string MetricsRegistry::export_text() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::string out;
  for (const auto& [name, by_labels] : series_) {
    if (by_labels.empty()) continue;
    const MetricKind kind = by_labels.begin()->second.kind;
    out += "# TYPE ";
    out += name;
    out += kind == MetricKind::Counter ? " counter\n" : " gauge\n";
    for (const auto& [key, s] : by_labels) {
      if (s.samples.empty()) continue;
      const Sample& last = s.samples.back();
      out += name;
      out += key;
      out += ' ';
      out += format_metric_value(last.value);
      out += ' ';
      out += std::to_string(to_millis_floor(last.t));
      out += '\n';
    }
  }
  return out;
}

const Sample* MetricsRegistry::latest(const std::string& name,
                                      const Labels& labels) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = series_.find(name);
  if (it == series_.end()) return nullptr;
  const auto sit = it->second.find(serialize_labels(labels));
  if (sit == it->second.end() || sit->second.samples.empty()) return nullptr;
  return &sit->second.samples.back();
}

std::vector<std::pair<std::string, Series>> MetricsRegistry::snapshot() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<std::pair<std::string, Series>> out;
  for (const auto& [name, by_labels] : series_) {
    for (const auto& [key, s] : by_labels) out.emplace_back(name, s);
  }
  return out;
}

bool MetricsRegistry::empty() const {
  std::lock_guard<std::mutex> lock(mu_);
  return series_.empty();
}

std::vector<ParsedSample> parse_exposition(const std::string& text) {
  std::vector<ParsedSample> out;
  std::istringstream in(text);
  std::string line;
  MetricKind kind = MetricKind::Gauge;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# TYPE ", 0) == 0) {
      const std::size_t sp = line.rfind(' ');
      const std::string kind_str = line.substr(sp + 1);
      kind = kind_str == "counter" ? MetricKind::Counter : MetricKind::Gauge;
      continue;
    }
    ParsedSample sample;
    sample.kind = kind;
    std::size_t name_end = line.find_first_of("{ ");
    if (name_end == std::string::npos) {
      raise(ErrorCode::ParseError, "bad exposition line: " + line);
    }
    sample.name = line.substr(0, name_end);
    std::size_t pos = name_end;
    if (line[pos] == '{') {
      const std::size_t close = line.find('}', pos);
      if (close == std::string::npos) {
        raise(ErrorCode::ParseError, "bad labels: " + line);
      }
      std::string body = line.substr(pos + 1, close - pos - 1);
      std::size_t start = 0;
      while (start < body.size()) {
        std::size_t comma = body.find(',', start);
        if (comma == std::string::npos) comma = body.size();
        const std::string item = body.substr(start, comma - start);
        const std::size_t eq = item.find('=');
        if (eq == std::string::npos || item.size() < eq + 3) {
          raise(ErrorCode::ParseError, "bad label item: " + item);
        }
        sample.labels[item.substr(0, eq)] =
            item.substr(eq + 2, item.size() - eq - 3);
        start = comma + 1;
      }
      pos = close + 1;
    }
    std::istringstream rest(line.substr(pos));
    std::string value_str;
    rest >> value_str >> sample.timestamp_ms;
    sample.value = std::strtod(value_str.c_str(), nullptr);
    out.push_back(std::move(sample));
  }
  return out;
}

void BusyTracker::add_busy(const std::string& resource, VTime start, VTime end) {
  if (end <= start) return;
  std::lock_guard<std::mutex> lock(mu_);
  intervals_[resource].emplace_back(start, end);
}

Duration BusyTracker::busy_in(const std::string& resource, VTime w_start,
                              VTime w_end) const {
  std::lock_guard<std::mutex> lock(mu_);
  Duration busy{0};
  const auto it = intervals_.find(resource);
  if (it == intervals_.end()) return busy;
  for (const auto& [s, e] : it->second) {
    const VTime lo = std::max(s, w_start);
    const VTime hi = std::min(e, w_end);
    if (hi > lo) busy += hi - lo;
  }
  return busy;
}

double BusyTracker::saturation(const std::string& resource, VTime w_start,
                               VTime w_end) const {
  if (w_end <= w_start) {
    raise(ErrorCode::EmptyWindow, "saturation window has length <= 0");
  }
  const Duration busy = busy_in(resource, w_start, w_end);
  return static_cast<double>(busy.count()) /
         static_cast<double>((w_end - w_start).count());
}

}  // namespace qcsc::telemetry
