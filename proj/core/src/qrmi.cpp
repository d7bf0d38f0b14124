#include "qcsc/qrmi/qrmi.hpp"

#include <algorithm>

namespace qcsc::qrmi {

const char* job_state_name(JobState s) {
  switch (s) {
    case JobState::Queued: return "Queued";
    case JobState::Running: return "Running";
    case JobState::Done: return "Done";
    case JobState::Error: return "Error";
    case JobState::Cancelled: return "Cancelled";
  }
  return "?";
}

namespace {

JobState from_device_state(qpu::DeviceJobState s) {
  switch (s) {
    case qpu::DeviceJobState::Queued: return JobState::Queued;
    case qpu::DeviceJobState::Running: return JobState::Running;
    case qpu::DeviceJobState::Done: return JobState::Done;
    case qpu::DeviceJobState::Error: return JobState::Error;
    case qpu::DeviceJobState::Cancelled: return JobState::Cancelled;
  }
  return JobState::Error;
}

bool legal_transition(JobState from, JobState to) {
  if (from == to) return true;
  switch (from) {
    case JobState::Queued:
      return to == JobState::Running || to == JobState::Done ||
             to == JobState::Error || to == JobState::Cancelled;
    case JobState::Running:
      return to == JobState::Done || to == JobState::Error ||
             to == JobState::Cancelled;
    default:
      return false;
  }
}

}  // namespace

Qrmi::Qrmi(sim::SimKernel& kernel) : kernel_(kernel) {}

void Qrmi::register_backend(std::shared_ptr<qpu::MockQpuDevice> device) {
  std::lock_guard lock(mu_);
  devices_.emplace(device->id(), std::move(device));
}

qpu::MockQpuDevice& Qrmi::device(const std::string& resource_id) const {
  const auto it = devices_.find(resource_id);
  if (it == devices_.end()) {
    raise(ErrorCode::UnknownResource, "no backend '" + resource_id + "'");
  }
  return *it->second;
}

std::vector<ResourceInfo> Qrmi::list_resources() const {
  std::lock_guard lock(mu_);
  std::vector<ResourceInfo> out;
  for (const auto& [id, dev] : devices_) {
    out.push_back(ResourceInfo{id, NodeKind::Qpu, dev->qubits(), dev->accessible()});
  }
  return out;
}

AcquisitionToken Qrmi::acquire(const std::string& resource_id,
                               const std::string& holder, Duration lease) {
  std::lock_guard lock(mu_);
  qpu::MockQpuDevice& dev = device(resource_id);
  if (!dev.accessible()) {
    raise(ErrorCode::ResourceInaccessible,
          "resource '" + resource_id + "' is not accessible");
  }
  const auto held = holder_by_resource_.find(resource_id);
  if (held != holder_by_resource_.end()) {
    raise(ErrorCode::ResourceHeld, "resource '" + resource_id + "' held by " +
                                       held->second);
  }
  AcquisitionToken token;
  token.token_id = "tok-" + std::to_string(next_token_number_++);
  token.resource_id = resource_id;
  token.holder = holder;
  token.expires_at = kernel_.now() + lease;
  tokens_[token.token_id] = token;
  token_alive_[token.token_id] = true;
  holder_by_resource_[resource_id] = token.token_id;
  audit_.push_back({kernel_.now(), "acquire", resource_id, token.token_id, holder});

  const std::string token_id = token.token_id;
  kernel_.post(token.expires_at, "qrmi", "lease-expiry", [this, token_id] {
    std::lock_guard inner(mu_);
    if (!token_alive_[token_id]) return;
    do_release(token_id, "expire");
  });
  return token;
}

void Qrmi::do_release(const std::string& token_id, const char* event) {
  const AcquisitionToken& token = tokens_.at(token_id);
  token_alive_[token_id] = false;
  holder_by_resource_.erase(token.resource_id);
  audit_.push_back(
      {kernel_.now(), event, token.resource_id, token_id, token.holder});
  // In-flight jobs submitted under this token are cancelled.
  const auto it = jobs_by_token_.find(token_id);
  if (it != jobs_by_token_.end()) {
    for (const std::string& job_id : it->second) {
      JobEntry& entry = jobs_.at(job_id);
      if (entry.handle.state == JobState::Queued ||
          entry.handle.state == JobState::Running) {
        device(entry.device_id).cancel(entry.device_job_id);
      }
    }
  }
}

void Qrmi::release(const std::string& token_id) {
  std::lock_guard lock(mu_);
  const auto it = token_alive_.find(token_id);
  if (it == token_alive_.end()) {
    raise(ErrorCode::UnknownToken, "no token '" + token_id + "'");
  }
  if (!it->second) {
    raise(ErrorCode::AlreadyReleased, "token '" + token_id + "' is not live");
  }
  do_release(token_id, "release");
}

bool Qrmi::token_live(const std::string& token_id) const {
  std::lock_guard lock(mu_);
  const auto it = token_alive_.find(token_id);
  return it != token_alive_.end() && it->second;
}

QuantumJobHandle Qrmi::submit_job(const std::string& token_id,
                                  const qpu::CircuitSpec& circuit,
                                  SubmitOptions options) {
  std::lock_guard lock(mu_);
  const auto it = token_alive_.find(token_id);
  if (it == token_alive_.end()) {
    raise(ErrorCode::UnknownToken, "no token '" + token_id + "'");
  }
  if (!it->second || tokens_.at(token_id).expires_at <= kernel_.now()) {
    raise(ErrorCode::TokenExpired, "token '" + token_id + "' is not live");
  }
  const AcquisitionToken& token = tokens_.at(token_id);

  const std::string job_id = "qjob-" + std::to_string(next_job_number_++);
  JobEntry entry;
  entry.handle.job_id = job_id;
  entry.handle.resource_id = token.resource_id;
  entry.handle.state = JobState::Queued;
  entry.handle.submitted_at = kernel_.now();
  entry.device_id = token.resource_id;

  qpu::QsaSubmitOptions device_options;
  device_options.on_batch = options.on_batch;
  const auto notify = options.on_terminal;
  const std::string origin = options.origin;
  device_options.on_terminal = [this, job_id, notify, origin](
                                   const std::string&, qpu::DeviceJobState s) {
    JobEntry& e = jobs_.at(job_id);
    transition(e, from_device_state(s));
    e.handle.finished_at = kernel_.now();
    if (!notify) return;
    const QuantumJobHandle snapshot = e.handle;
    if (origin.empty()) {
      notify(snapshot);
    } else {
      // Completion notice rides back as a small control message.
      kernel_.transfer(e.device_id, origin, 64, "qrmi-job-terminal",
                       [notify, snapshot] { notify(snapshot); });
    }
  };

  auto enqueue = [this, job_id, circuit, device_options, notify,
                  origin](bool async) {
    JobEntry& e = jobs_.at(job_id);
    try {
      e.device_job_id = device(e.device_id).submit(circuit, device_options);
    } catch (const Error&) {
      transition(e, JobState::Error);
      e.handle.finished_at = kernel_.now();
      if (!async) throw;
      // Async rejection surfaces through the terminal callback.
      if (notify) {
        const QuantumJobHandle snapshot = e.handle;
        kernel_.transfer(e.device_id, origin, 64, "qrmi-job-terminal",
                         [notify, snapshot] { notify(snapshot); });
      }
      return;
    }
    if (device(e.device_id).status(e.device_job_id) ==
        qpu::DeviceJobState::Running) {
      transition(e, JobState::Running);
    }
  };

  jobs_.emplace(job_id, std::move(entry));
  jobs_by_token_[token_id].push_back(job_id);
  if (options.origin.empty()) {
    enqueue(false);  // throws DeviceRejected synchronously
  } else {
    kernel_.transfer(options.origin, token.resource_id,
                     qpu::circuit_wire_bytes(circuit), "qrmi-submit",
                     [enqueue] { enqueue(true); });
  }
  return jobs_.at(job_id).handle;
}

void Qrmi::transition(JobEntry& entry, JobState next) {
  if (entry.handle.state == next) return;
  if (!legal_transition(entry.handle.state, next)) {
    raise(ErrorCode::RuntimeFailure,
          std::string("illegal job transition ") +
              job_state_name(entry.handle.state) + " -> " + job_state_name(next));
  }
  entry.handle.state = next;
}

JobState Qrmi::job_status(const std::string& job_id) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  // Poll the device for queued->running edges that had no event yet.
  JobEntry& entry = it->second;
  if (!entry.device_job_id.empty() && entry.handle.state == JobState::Queued) {
    const auto ds = device(entry.device_id).status(entry.device_job_id);
    if (ds == qpu::DeviceJobState::Running) transition(entry, JobState::Running);
  }
  return entry.handle.state;
}

qpu::SampleSet Qrmi::fetch_results(const std::string& job_id) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  if (it->second.handle.state != JobState::Done) {
    raise(ErrorCode::NotDone, "job '" + job_id + "' is " +
                                  job_state_name(it->second.handle.state));
  }
  return device(it->second.device_id).results(it->second.device_job_id);
}

std::uint64_t Qrmi::result_wire_bytes(const std::string& job_id) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  return device(it->second.device_id).result_wire_bytes(it->second.device_job_id);
}

void Qrmi::cancel_job(const std::string& job_id) {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  JobEntry& entry = it->second;
  if (entry.handle.state == JobState::Done ||
      entry.handle.state == JobState::Error ||
      entry.handle.state == JobState::Cancelled) {
    raise(ErrorCode::NotCancellable, "job '" + job_id + "' already " +
                                         job_state_name(entry.handle.state));
  }
  if (!entry.device_job_id.empty()) {
    device(entry.device_id).cancel(entry.device_job_id);
  } else {
    transition(entry, JobState::Cancelled);
    entry.handle.finished_at = kernel_.now();
  }
}

QuantumJobHandle Qrmi::handle(const std::string& job_id) const {
  std::lock_guard lock(mu_);
  const auto it = jobs_.find(job_id);
  if (it == jobs_.end()) raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  return it->second.handle;
}

std::variant<JobState, qpu::SampleSet> Qrmi::job_lifecycle(
    const std::string& job_id, LifecycleAction action) {
  switch (action) {
    case LifecycleAction::Status:
      return job_status(job_id);
    case LifecycleAction::Cancel:
      cancel_job(job_id);
      return job_status(job_id);
    case LifecycleAction::FetchResults:
      return fetch_results(job_id);
  }
  raise(ErrorCode::RuntimeFailure, "bad lifecycle action");
}

}  // namespace qcsc::qrmi
