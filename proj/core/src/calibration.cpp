#include "qcsc/qpu/calibration.hpp"

#include <algorithm>
#include <cmath>

namespace qcsc::qpu {

Calibration drift_step(const Calibration& calibration, const DriftConfig& config,
                       VTime now, sim::RngStream& rng) {
  Calibration next = calibration;
  auto walk = [&](double rate) {
    const double u = 2.0 * rng.next_double() - 1.0;
    const double stepped = rate * std::exp(config.magnitude * u);
    return std::clamp(stepped, config.band.lo, config.band.hi);
  };
  if (config.magnitude != 0.0) {
    next.gate_error = walk(calibration.gate_error);
    next.readout_error = walk(calibration.readout_error);
  }
  next.timestamp = now;
  return next;
}

nlohmann::json calibration_to_json(const Calibration& c) {
  return {{"readout_error", c.readout_error},
          {"gate_error", c.gate_error},
          {"t1_proxy", format_duration(c.t1_proxy)},
          {"timestamp_ns", c.timestamp.count()}};
}

Calibration calibration_from_json(const nlohmann::json& j) {
  Calibration c;
  c.readout_error = j.value("readout_error", 1e-3);
  c.gate_error = j.value("gate_error", 1e-3);
  if (j.contains("t1_proxy")) {
    const auto& v = j.at("t1_proxy");
    c.t1_proxy = v.is_string() ? parse_duration(v.get<std::string>())
                               : Duration(v.get<std::int64_t>());
  }
  c.timestamp = VTime(j.value("timestamp_ns", std::int64_t{0}));
  return c;
}

}  // namespace qcsc::qpu
