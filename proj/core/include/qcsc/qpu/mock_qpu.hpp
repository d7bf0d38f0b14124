#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcsc/model/topology.hpp"
#include "qcsc/qpu/calibration.hpp"
#include "qcsc/qpu/circuit.hpp"
#include "qcsc/sim/kernel.hpp"
#include "qcsc/sim/rng.hpp"
#include "qcsc/telemetry/registry.hpp"

namespace qcsc::qpu {

struct QpuTimingConfig {
  Duration t_shot_base{std::chrono::milliseconds(1)};
  Duration t_gate{std::chrono::microseconds(1)};
};

// Deterministic timing model shared by the device and the scheduler's
// runtime estimation: shots * (t_shot_base + two_qubit_gate_count * t_gate).
Duration estimate_exec_time(const CircuitSpec& circuit,
                            const QpuTimingConfig& timing = {});

// Number of gate endpoints touching qubit q when 2 * gate_count touches are
// spread round-robin over num_qubits qubits.
int gates_touching_qubit(int q, int num_qubits, int gate_count);

// Pure sampling semantics behind the device: draws `shots` bitstrings from
// |<x|psi>|^2 of the model ground state (or the theta-interpolated state),
// then applies per-qubit gate-error and readout bit flips. The execution
// duration is estimate_exec_time(...) + fixed_overhead.
SampleSet execute_circuit(const CircuitSpec& circuit,
                          const Calibration& calibration,
                          const QpuTimingConfig& timing,
                          Duration fixed_overhead, sim::RngStream& rng);

// One repetition-code measurement batch.
struct SyndromeBatch {
  VTime timestamp{0};
  int distance = 0;
  Bitstring physical_bits = 0;  // d sampled bits
  int true_logical_bit = 0;     // hidden from decoders, kept for scoring
};

SyndromeBatch make_syndrome_batch(VTime timestamp, int distance,
                                  double physical_error, sim::RngStream& rng);

enum class DeviceJobState { Queued, Running, Done, Error, Cancelled };
const char* device_job_state_name(DeviceJobState s);

struct QsaSubmitOptions {
  // Invoked (at the completion event) when the job reaches a terminal state.
  std::function<void(const std::string& job_id, DeviceJobState state)>
      on_terminal;
  // SyndromeEmitter jobs: invoked at each batch emission instant.
  std::function<void(const SyndromeBatch&)> on_batch;
};

struct QpuConfig {
  QpuTimingConfig timing;
  Calibration initial_calibration;
  DriftConfig drift;
};

// Simulated quantum system behind the QSA boundary: FIFO job queue, drifting
// calibration, telemetry. All state changes happen inside kernel events;
// concurrent API requests are admitted but applied one at a time.
class MockQpuDevice {
 public:
  MockQpuDevice(sim::SimKernel& kernel, ResourceNode node, QpuConfig config,
                std::uint64_t seed,
                telemetry::MetricsRegistry* metrics = nullptr,
                telemetry::BusyTracker* busy = nullptr);

  const std::string& id() const { return node_.id; }
  int qubits() const { return node_.qpu_qubits; }
  bool accessible() const { return !maintenance_; }
  void set_maintenance(bool on) { maintenance_ = on; }

  Calibration calibration() const { return calibration_; }
  void start_drift();  // begins periodic drift events (config.drift.period)

  // QSA surface. submit validates and enqueues; execution happens through
  // kernel events. Errors: DeviceRejected wrapping the validation failure.
  std::string submit(const CircuitSpec& circuit, QsaSubmitOptions options = {});
  DeviceJobState status(const std::string& job_id) const;  // UnknownJob
  // Results of a Done job. Errors: UnknownJob, NotDone.
  const SampleSet& results(const std::string& job_id) const;
  std::uint64_t result_wire_bytes(const std::string& job_id) const;
  const std::vector<SyndromeBatch>& syndrome_results(
      const std::string& job_id) const;
  // Queued jobs are dropped; a running job is aborted at the current instant.
  // Errors: UnknownJob, NotCancellable (already terminal).
  void cancel(const std::string& job_id);

  int queue_depth() const;
  Duration estimate(const CircuitSpec& circuit) const;

 private:
  struct DeviceJob {
    std::string id;
    CircuitSpec circuit;
    QsaSubmitOptions options;
    DeviceJobState state = DeviceJobState::Queued;
    VTime started{0};
    VTime finished{0};
    std::uint64_t epoch = 0;  // invalidates in-flight completion events
    SampleSet samples;
    std::vector<SyndromeBatch> batches;
    int batches_emitted = 0;
  };

  void pump();  // starts the queue head if the device is idle
  void finish_job(DeviceJob& job, DeviceJobState state, VTime busy_since);
  void emit_next_batch(const std::string& job_id, std::uint64_t epoch);
  void observe_gauges();
  DeviceJob& job_ref(const std::string& job_id);
  const DeviceJob& job_ref(const std::string& job_id) const;

  sim::SimKernel& kernel_;
  ResourceNode node_;
  QpuConfig config_;
  std::uint64_t seed_;
  telemetry::MetricsRegistry* metrics_;
  telemetry::BusyTracker* busy_;

  Calibration calibration_;
  bool maintenance_ = false;
  std::map<std::string, DeviceJob> jobs_;
  std::vector<std::string> queue_;  // FIFO of queued job ids
  std::optional<std::string> running_;
  std::uint64_t next_job_number_ = 0;
  std::uint64_t completed_jobs_ = 0;
  double busy_seconds_total_ = 0.0;
};

}  // namespace qcsc::qpu
