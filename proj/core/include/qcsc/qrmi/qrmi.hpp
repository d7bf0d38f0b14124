#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qcsc/qpu/mock_qpu.hpp"
#include "qcsc/sim/kernel.hpp"

namespace qcsc::qrmi {

struct ResourceInfo {
  std::string id;
  NodeKind kind = NodeKind::Qpu;
  int qubits = 0;
  bool accessible = false;
};

struct AcquisitionToken {
  std::string token_id;
  std::string resource_id;
  std::string holder;
  VTime expires_at{0};
};

enum class JobState { Queued, Running, Done, Error, Cancelled };
const char* job_state_name(JobState s);

struct QuantumJobHandle {
  std::string job_id;
  std::string resource_id;
  JobState state = JobState::Queued;
  VTime submitted_at{0};
  VTime finished_at{0};
};

enum class LifecycleAction { Status, Cancel, FetchResults };

struct SubmitOptions {
  // Node the submission originates from; when set, the circuit upload and the
  // terminal notification ride the topology (transfer-modeled latency).
  std::string origin;
  std::function<void(const QuantumJobHandle&)> on_terminal;
  std::function<void(const qpu::SyndromeBatch&)> on_batch;
};

struct AuditRecord {
  VTime t{0};
  std::string event;  // acquire | release | expire
  std::string resource;
  std::string token;
  std::string holder;
};

// The minimal resource-management boundary between schedulers/workflows and
// quantum resources: discovery, accessibility, acquisition, and job
// lifecycle. Backend-agnostic by layering: everything below goes through the
// device's QSA surface. Exclusive acquisition; lease expiry auto-releases and
// cancels in-flight jobs.
class Qrmi {
 public:
  explicit Qrmi(sim::SimKernel& kernel);

  void register_backend(std::shared_ptr<qpu::MockQpuDevice> device);

  std::vector<ResourceInfo> list_resources() const;

  // Errors: UnknownResource, ResourceInaccessible, ResourceHeld.
  AcquisitionToken acquire(const std::string& resource_id,
                           const std::string& holder, Duration lease);
  // Errors: UnknownToken, AlreadyReleased.
  void release(const std::string& token_id);
  bool token_live(const std::string& token_id) const;

  // Errors: TokenExpired (dead token), DeviceRejected (propagated QSA error).
  QuantumJobHandle submit_job(const std::string& token_id,
                              const qpu::CircuitSpec& circuit,
                              SubmitOptions options = {});

  // Status returns the current state; Cancel transitions per the state
  // machine; FetchResults yields the SampleSet iff Done.
  // Errors: UnknownJob, NotDone, NotCancellable.
  std::variant<JobState, qpu::SampleSet> job_lifecycle(
      const std::string& job_id, LifecycleAction action);

  JobState job_status(const std::string& job_id);
  qpu::SampleSet fetch_results(const std::string& job_id);
  std::uint64_t result_wire_bytes(const std::string& job_id);
  void cancel_job(const std::string& job_id);
  QuantumJobHandle handle(const std::string& job_id) const;

  const std::vector<AuditRecord>& audit_log() const { return audit_; }

 private:
  struct JobEntry {
    QuantumJobHandle handle;
    std::string device_job_id;
    std::string device_id;
  };

  void do_release(const std::string& token_id, const char* event);
  qpu::MockQpuDevice& device(const std::string& resource_id) const;
  void transition(JobEntry& entry, JobState next);

  sim::SimKernel& kernel_;
  mutable std::recursive_mutex mu_;
  std::map<std::string, std::shared_ptr<qpu::MockQpuDevice>> devices_;
  std::map<std::string, AcquisitionToken> tokens_;        // live + dead
  std::map<std::string, bool> token_alive_;
  std::map<std::string, std::string> holder_by_resource_;  // live tokens only
  std::map<std::string, JobEntry> jobs_;
  std::map<std::string, std::vector<std::string>> jobs_by_token_;
  std::vector<AuditRecord> audit_;
  std::uint64_t next_token_number_ = 0;
  std::uint64_t next_job_number_ = 0;
};

}  // namespace qcsc::qrmi
