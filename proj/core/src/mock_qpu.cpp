#include "qcsc/qpu/mock_qpu.hpp"

#include <cmath>

#include "qcsc/qpu/sector_solver.hpp"

namespace qcsc::qpu {

Duration estimate_exec_time(const CircuitSpec& circuit,
                            const QpuTimingConfig& timing) {
  const Duration per_shot =
      timing.t_shot_base + circuit.two_qubit_gate_count * timing.t_gate;
  return circuit.shots * per_shot;
}

int gates_touching_qubit(int q, int num_qubits, int gate_count) {
  const int touches = 2 * gate_count;
  return touches / num_qubits + (q < touches % num_qubits ? 1 : 0);
}

namespace {

// Amplitudes of the sampled state over the sector basis. theta interpolates
// between the mean-field configuration (theta = 0) and the exact ground
// state (theta = pi/2); the optimum of the closed-loop search is pi/2 by
// construction.
std::vector<double> sampled_state(const CircuitSpec& circuit,
                                  const std::vector<Bitstring>& basis) {
  const SectorGroundState ground = sector_ground_state(circuit.model);
  if (circuit.kind == CircuitKind::GroundStateSampler) return ground.amplitudes;

  const double theta = circuit.theta.front();
  const Bitstring mf = mean_field_state(circuit.model);
  std::vector<double> psi(basis.size(), 0.0);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  for (std::size_t i = 0; i < basis.size(); ++i) {
    psi[i] = s * ground.amplitudes[i];
    if (basis[i] == mf) psi[i] += c;
  }
  double norm = 0.0;
  for (const double a : psi) norm += a * a;
  if (norm <= 0.0) {
    raise(ErrorCode::InvalidTheta,
          "theta produces a null state (cos/sin cancellation)");
  }
  norm = std::sqrt(norm);
  for (double& a : psi) a /= norm;
  return psi;
}

}  // namespace

SampleSet execute_circuit(const CircuitSpec& circuit,
                          const Calibration& calibration,
                          const QpuTimingConfig& timing,
                          Duration fixed_overhead, sim::RngStream& rng) {
  validate_circuit(circuit);
  if (circuit.kind == CircuitKind::SyndromeEmitter) {
    raise(ErrorCode::InvalidCircuit,
          "SyndromeEmitter circuits stream batches; use emit_syndromes");
  }
  const std::vector<Bitstring> basis =
      sector_basis(circuit.model.sites, circuit.model.magnetization_k);
  const std::vector<double> psi = sampled_state(circuit, basis);
  std::vector<double> probabilities(psi.size());
  for (std::size_t i = 0; i < psi.size(); ++i) probabilities[i] = psi[i] * psi[i];
  const sim::CategoricalSampler sampler(probabilities);

  const int n = circuit.num_qubits;
  std::vector<double> p_flip(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) {
    const int touches = gates_touching_qubit(q, n, circuit.two_qubit_gate_count);
    p_flip[static_cast<std::size_t>(q)] =
        1.0 - std::pow(1.0 - calibration.gate_error, touches);
  }

  SampleSet out;
  out.circuit_id = circuit.id;
  out.width = n;
  out.bitstrings.reserve(static_cast<std::size_t>(circuit.shots));
  for (int shot = 0; shot < circuit.shots; ++shot) {
    Bitstring x = basis[sampler.sample(rng)];
    for (int q = 0; q < n; ++q) {
      if (rng.bernoulli(p_flip[static_cast<std::size_t>(q)])) {
        x ^= Bitstring{1} << q;
      }
      if (rng.bernoulli(calibration.readout_error)) {
        x ^= Bitstring{1} << q;
      }
    }
    out.bitstrings.push_back(x);
  }
  out.execution_time = estimate_exec_time(circuit, timing) + fixed_overhead;
  return out;
}

SyndromeBatch make_syndrome_batch(VTime timestamp, int distance,
                                  double physical_error, sim::RngStream& rng) {
  if (distance < 3 || distance % 2 == 0) {
    raise(ErrorCode::InvalidDistance, "distance must be odd and >= 3");
  }
  SyndromeBatch batch;
  batch.timestamp = timestamp;
  batch.distance = distance;
  batch.true_logical_bit = rng.bernoulli(0.5) ? 1 : 0;
  Bitstring bits = batch.true_logical_bit ? (Bitstring{1} << distance) - 1 : 0;
  for (int i = 0; i < distance; ++i) {
    if (rng.bernoulli(physical_error)) bits ^= Bitstring{1} << i;
  }
  batch.physical_bits = bits;
  return batch;
}

const char* device_job_state_name(DeviceJobState s) {
  switch (s) {
    case DeviceJobState::Queued: return "QUEUED";
    case DeviceJobState::Running: return "RUNNING";
    case DeviceJobState::Done: return "DONE";
    case DeviceJobState::Error: return "ERROR";
    case DeviceJobState::Cancelled: return "CANCELLED";
  }
  return "?";
}

MockQpuDevice::MockQpuDevice(sim::SimKernel& kernel, ResourceNode node,
                             QpuConfig config, std::uint64_t seed,
                             telemetry::MetricsRegistry* metrics,
                             telemetry::BusyTracker* busy)
    : kernel_(kernel),
      node_(std::move(node)),
      config_(std::move(config)),
      seed_(seed),
      metrics_(metrics),
      busy_(busy),
      calibration_(config_.initial_calibration) {
  calibration_.timestamp = kernel_.now();
  observe_gauges();
}

void MockQpuDevice::observe_gauges() {
  if (metrics_ == nullptr) return;
  const telemetry::Labels labels{{"device", node_.id}};
  const VTime now = kernel_.now();
  metrics_->observe("qpu.gate_error", telemetry::MetricKind::Gauge, labels,
                    calibration_.gate_error, now);
  metrics_->observe("qpu.readout_error", telemetry::MetricKind::Gauge, labels,
                    calibration_.readout_error, now);
  metrics_->observe("qpu.calibration_age", telemetry::MetricKind::Gauge, labels,
                    to_seconds(now - calibration_.timestamp), now);
  metrics_->observe("qpu.queue_depth", telemetry::MetricKind::Gauge, labels,
                    static_cast<double>(queue_depth()), now);
  metrics_->observe("qpu.jobs_completed", telemetry::MetricKind::Counter,
                    labels, static_cast<double>(completed_jobs_), now);
  metrics_->observe("qpu.busy_seconds", telemetry::MetricKind::Counter, labels,
                    busy_seconds_total_, now);
}

void MockQpuDevice::start_drift() {
  if (config_.drift.period <= Duration{0}) return;
  kernel_.post_after(
      config_.drift.period, node_.id, "calibration-drift", [this] {
        auto rng = sim::RngStream(seed_, "qpu/" + node_.id + "/drift")
                       .child(std::to_string(calibration_.timestamp.count()));
        calibration_ = drift_step(calibration_, config_.drift, kernel_.now(), rng);
        observe_gauges();
        start_drift();
      });
}

std::string MockQpuDevice::submit(const CircuitSpec& circuit,
                                  QsaSubmitOptions options) {
  if (maintenance_) {
    raise(ErrorCode::ResourceInaccessible,
          "device " + node_.id + " is under maintenance");
  }
  try {
    validate_circuit(circuit);
    if (circuit.kind != CircuitKind::SyndromeEmitter &&
        circuit.num_qubits > node_.qpu_qubits) {
      raise(ErrorCode::InvalidCircuit,
            "circuit needs " + std::to_string(circuit.num_qubits) +
                " qubits, device has " + std::to_string(node_.qpu_qubits));
    }
  } catch (const Error& e) {
    throw Error(ErrorCode::DeviceRejected, e.what());
  }

  const std::string job_id =
      node_.id + "-j" + std::to_string(next_job_number_++);
  DeviceJob job;
  job.id = job_id;
  job.circuit = circuit;
  if (job.circuit.rng_stream.empty()) {
    job.circuit.rng_stream = "qpu/" + node_.id + "/job/" + job_id;
  }
  job.options = std::move(options);
  jobs_.emplace(job_id, std::move(job));
  queue_.push_back(job_id);
  observe_gauges();
  pump();
  return job_id;
}

void MockQpuDevice::pump() {
  if (running_.has_value() || queue_.empty()) return;
  const std::string job_id = queue_.front();
  queue_.erase(queue_.begin());
  DeviceJob& job = job_ref(job_id);
  job.state = DeviceJobState::Running;
  job.started = kernel_.now();
  running_ = job_id;
  observe_gauges();

  const std::uint64_t epoch = job.epoch;
  if (job.circuit.kind == CircuitKind::SyndromeEmitter) {
    emit_next_batch(job_id, epoch);
    return;
  }
  const Duration duration =
      estimate_exec_time(job.circuit, config_.timing) + node_.service_overhead;
  // Calibration snapshot at job start governs the whole execution.
  const Calibration snapshot = calibration_;
  kernel_.post_after(duration, node_.id, "qpu-job-done",
                     [this, job_id, epoch, snapshot] {
    DeviceJob& j = job_ref(job_id);
    if (j.epoch != epoch || j.state != DeviceJobState::Running) return;
    auto rng = sim::RngStream(seed_, j.circuit.rng_stream);
    j.samples = execute_circuit(j.circuit, snapshot, config_.timing,
                                node_.service_overhead, rng);
    finish_job(j, DeviceJobState::Done, j.started);
  });
}

void MockQpuDevice::emit_next_batch(const std::string& job_id,
                                    std::uint64_t epoch) {
  DeviceJob& job = job_ref(job_id);
  const SyndromeSpec spec = *job.circuit.syndromes;
  kernel_.post_after(spec.period, node_.id, "syndrome-batch",
                     [this, job_id, epoch] {
    DeviceJob& j = job_ref(job_id);
    if (j.epoch != epoch || j.state != DeviceJobState::Running) return;
    const SyndromeSpec& s = *j.circuit.syndromes;
    auto rng = sim::RngStream(seed_, j.circuit.rng_stream)
                   .child("batch/" + std::to_string(j.batches_emitted));
    const SyndromeBatch batch = make_syndrome_batch(
        kernel_.now(), s.distance, s.physical_error, rng);
    j.batches.push_back(batch);
    ++j.batches_emitted;
    if (j.options.on_batch) j.options.on_batch(batch);
    if (j.batches_emitted >= s.rounds) {
      finish_job(j, DeviceJobState::Done, j.started);
    } else {
      emit_next_batch(job_id, epoch);
    }
  });
}

void MockQpuDevice::finish_job(DeviceJob& job, DeviceJobState state,
                               VTime busy_since) {
  job.state = state;
  job.finished = kernel_.now();
  ++job.epoch;
  if (running_ == job.id) running_.reset();
  if (job.finished > busy_since) {
    if (busy_ != nullptr) busy_->add_busy(node_.id, busy_since, job.finished);
    busy_seconds_total_ += to_seconds(job.finished - busy_since);
  }
  if (state == DeviceJobState::Done) ++completed_jobs_;
  observe_gauges();
  if (job.options.on_terminal) job.options.on_terminal(job.id, state);
  pump();
}

MockQpuDevice::DeviceJob& MockQpuDevice::job_ref(const std::string& job_id) {
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  return it->second;
}

const MockQpuDevice::DeviceJob& MockQpuDevice::job_ref(
    const std::string& job_id) const {
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  return it->second;
}

DeviceJobState MockQpuDevice::status(const std::string& job_id) const {
  return job_ref(job_id).state;
}

const SampleSet& MockQpuDevice::results(const std::string& job_id) const {
  const DeviceJob& job = job_ref(job_id);
  if (job.state != DeviceJobState::Done) {
    raise(ErrorCode::NotDone, "job '" + job_id + "' is " +
                                  device_job_state_name(job.state));
  }
  return job.samples;
}

std::uint64_t MockQpuDevice::result_wire_bytes(const std::string& job_id) const {
  return sample_set_wire_bytes(results(job_id));
}

const std::vector<SyndromeBatch>& MockQpuDevice::syndrome_results(
    const std::string& job_id) const {
  const DeviceJob& job = job_ref(job_id);
  if (job.state != DeviceJobState::Done) {
    raise(ErrorCode::NotDone, "job '" + job_id + "' is " +
                                  device_job_state_name(job.state));
  }
  return job.batches;
}

void MockQpuDevice::cancel(const std::string& job_id) {
  DeviceJob& job = job_ref(job_id);
  switch (job.state) {
    case DeviceJobState::Queued: {
      std::erase(queue_, job_id);
      job.state = DeviceJobState::Cancelled;
      job.finished = kernel_.now();
      ++job.epoch;
      observe_gauges();
      if (job.options.on_terminal) {
        job.options.on_terminal(job.id, DeviceJobState::Cancelled);
      }
      return;
    }
    case DeviceJobState::Running:
      finish_job(job, DeviceJobState::Cancelled, job.started);
      return;
    case DeviceJobState::Done:
    case DeviceJobState::Error:
    case DeviceJobState::Cancelled:
      raise(ErrorCode::NotCancellable, "job '" + job_id + "' already " +
                                           device_job_state_name(job.state));
  }
}

int MockQpuDevice::queue_depth() const {
  return static_cast<int>(queue_.size()) + (running_.has_value() ? 1 : 0);
}

Duration MockQpuDevice::estimate(const CircuitSpec& circuit) const {
  return estimate_exec_time(circuit, config_.timing);
}

}  // namespace qcsc::qpu
