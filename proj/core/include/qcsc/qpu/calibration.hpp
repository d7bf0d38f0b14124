#pragma once

#include <nlohmann/json.hpp>

#include "qcsc/sim/rng.hpp"
#include "qcsc/time.hpp"

namespace qcsc::qpu {

struct CalibrationBand {
  double lo = 1e-4;
  double hi = 1e-2;
};

struct Calibration {
  double readout_error = 1e-3;  // per-qubit readout flip probability
  double gate_error = 1e-3;     // per-gate error probability
  Duration t1_proxy{std::chrono::microseconds(100)};
  VTime timestamp{0};
};

struct DriftConfig {
  Duration period{std::chrono::seconds(60)};
  double magnitude = 0.0;  // log-scale step size of the random walk
  CalibrationBand band;
};

// One bounded multiplicative random-walk step of each error rate, clamped to
// the configured band; the timestamp advances to `now`. magnitude 0 changes
// nothing but the timestamp.
Calibration drift_step(const Calibration& calibration, const DriftConfig& config,
                       VTime now, sim::RngStream& rng);

nlohmann::json calibration_to_json(const Calibration& calibration);
Calibration calibration_from_json(const nlohmann::json& j);

}  // namespace qcsc::qpu
