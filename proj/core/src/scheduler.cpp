#include "qcsc/sched/scheduler.hpp"

#include <algorithm>
#include <cassert>
#include <set>

namespace qcsc::sched {

const char* job_kind_name(JobKind kind) {
  switch (kind) {
    case JobKind::Classical: return "Classical";
    case JobKind::Quantum: return "Quantum";
    case JobKind::HybridClosedLoop: return "HybridClosedLoop";
  }
  return "?";
}

JobKind job_kind_from_string(const std::string& name) {
  if (name == "Classical") return JobKind::Classical;
  if (name == "Quantum") return JobKind::Quantum;
  if (name == "HybridClosedLoop") return JobKind::HybridClosedLoop;
  raise(ErrorCode::ParseError, "unknown job kind '" + name + "'");
}

const char* job_state_name(JobState s) {
  switch (s) {
    case JobState::Queued: return "QUEUED";
    case JobState::Running: return "RUNNING";
    case JobState::Completed: return "COMPLETED";
    case JobState::Failed: return "FAILED";
    case JobState::Cancelled: return "CANCELLED";
  }
  return "?";
}

void validate_job_spec(const JobSpec& spec) {
  if (spec.id.empty()) raise(ErrorCode::InvalidSpec, "job id must be set");
  if (spec.estimated_runtime <= Duration{0}) {
    raise(ErrorCode::InvalidSpec, "job '" + spec.id + "' estimated runtime <= 0");
  }
  const bool wants_qpu = spec.kind != JobKind::Classical;
  if (wants_qpu && spec.qubits <= 0) {
    raise(ErrorCode::InvalidSpec,
          "job '" + spec.id + "' is quantum but has no qubit demand");
  }
  if (!wants_qpu && spec.qubits != 0) {
    raise(ErrorCode::InvalidSpec,
          "classical job '" + spec.id + "' must not demand qubits");
  }
  const bool wants_nodes = spec.classical.nodes > 0;
  if (wants_nodes &&
      (spec.classical.cores_per_node < 0 || spec.classical.gpus_per_node < 0 ||
       spec.classical.cores_per_node + spec.classical.gpus_per_node == 0)) {
    raise(ErrorCode::InvalidSpec,
          "job '" + spec.id + "' demands nodes but no cores/gpus");
  }
  switch (spec.kind) {
    case JobKind::Classical:
      if (!wants_nodes) {
        raise(ErrorCode::InvalidSpec,
              "classical job '" + spec.id + "' has no node demand");
      }
      break;
    case JobKind::Quantum:
      if (wants_nodes) {
        raise(ErrorCode::InvalidSpec,
              "quantum job '" + spec.id + "' must not demand classical nodes");
      }
      break;
    case JobKind::HybridClosedLoop:
      if (!wants_nodes) {
        raise(ErrorCode::InvalidSpec,
              "hybrid job '" + spec.id + "' needs classical nodes too");
      }
      break;
  }
}

nlohmann::json job_spec_to_json(const JobSpec& spec) {
  nlohmann::json j{{"id", spec.id},
                   {"kind", job_kind_name(spec.kind)},
                   {"priority", spec.priority},
                   {"qubits", spec.qubits},
                   {"estimated_runtime", format_duration(spec.estimated_runtime)},
                   {"coupling",
                    {{"temporal", temporal_name(spec.min_coupling.temporal)},
                     {"spatial", spatial_name(spec.min_coupling.spatial)}}}};
  if (spec.classical.nodes > 0) {
    j["classical_demand"] = {{"nodes", spec.classical.nodes},
                             {"cores_per_node", spec.classical.cores_per_node},
                             {"gpus_per_node", spec.classical.gpus_per_node}};
  }
  if (spec.residency) j["residency"] = *spec.residency;
  if (!spec.workload.empty()) j["workload"] = spec.workload;
  if (!spec.params.empty()) j["params"] = spec.params;
  return j;
}

JobSpec job_spec_from_json(const nlohmann::json& j) {
  JobSpec spec;
  spec.id = j.at("id").get<std::string>();
  spec.kind = job_kind_from_string(j.value("kind", "Classical"));
  spec.priority = j.value("priority", 0);
  if (j.contains("classical_demand")) {
    const auto& d = j.at("classical_demand");
    spec.classical.nodes = d.value("nodes", 0);
    spec.classical.cores_per_node = d.value("cores_per_node", 0);
    spec.classical.gpus_per_node = d.value("gpus_per_node", 0);
  }
  spec.qubits = j.value("qubits", 0);
  const auto& rt = j.at("estimated_runtime");
  spec.estimated_runtime = rt.is_string()
                               ? parse_duration(rt.get<std::string>())
                               : Duration(rt.get<std::int64_t>());
  if (j.contains("coupling")) {
    spec.min_coupling.temporal =
        temporal_from_string(j.at("coupling").value("temporal", "BatchTime"));
    spec.min_coupling.spatial =
        spatial_from_string(j.at("coupling").value("spatial", "Loose"));
  }
  if (j.contains("residency") && !j.at("residency").is_null()) {
    spec.residency = j.at("residency").get<std::string>();
  }
  spec.workload = j.value("workload", std::string{});
  spec.params = j.value("params", nlohmann::json::object());
  return spec;
}

// --- JobRuntime ---

JobRuntime::JobRuntime(Scheduler& scheduler, JobSpec spec, Allocation allocation)
    : scheduler_(scheduler),
      spec_(std::move(spec)),
      allocation_(std::move(allocation)) {}

sim::SimKernel& JobRuntime::kernel() { return scheduler_.kernel_; }
qrmi::Qrmi& JobRuntime::qrmi() { return scheduler_.qrmi_; }

sim::RngStream JobRuntime::rng(std::string_view suffix) const {
  return sim::RngStream(scheduler_.config_.seed,
                        "job/" + spec_.id + "/" + std::string(suffix));
}

void JobRuntime::finish() {
  if (!alive_) return;
  scheduler_.complete_job(spec_.id);
}

void JobRuntime::fail(ErrorCode code, const std::string& detail) {
  if (!alive_) return;
  scheduler_.fail_job(spec_.id, code, detail);
}

// --- capacity helpers ---

namespace {

bool interval_free(const std::vector<Booking>& bookings, VTime t0, VTime t1) {
  for (const Booking& b : bookings) {
    if (b.start < t1 && t0 < b.end) return false;
  }
  return true;
}

bool node_has_capacity(const ResourceNode& node,
                       const std::vector<Booking>& bookings, int need_cores,
                       int need_gpus, VTime t0, VTime t1) {
  // Usage only changes at booking starts; evaluate t0 and every start in
  // (t0, t1).
  std::vector<VTime> instants{t0};
  for (const Booking& b : bookings) {
    if (b.start > t0 && b.start < t1) instants.push_back(b.start);
  }
  for (const VTime s : instants) {
    int cores = 0, gpus = 0;
    for (const Booking& b : bookings) {
      if (b.start <= s && s < b.end) {
        cores += b.cores;
        gpus += b.gpus;
      }
    }
    if (node.cpu_cores - cores < need_cores || node.gpu_units - gpus < need_gpus) {
      return false;
    }
  }
  return true;
}

std::vector<Booking>& bookings_for(
    std::map<std::string, std::vector<Booking>>& m, const std::string& id) {
  return m[id];
}

const std::vector<Booking> kNoBookings;

const std::vector<Booking>& bookings_for(
    const std::map<std::string, std::vector<Booking>>& m,
    const std::string& id) {
  const auto it = m.find(id);
  return it == m.end() ? kNoBookings : it->second;
}

}  // namespace

// --- Scheduler ---

Scheduler::Scheduler(sim::SimKernel& kernel, const Topology& topology,
                     const CouplingThresholds& thresholds, qrmi::Qrmi& qrmi,
                     SchedulerConfig config)
    : kernel_(kernel),
      topology_(topology),
      thresholds_(thresholds),
      qrmi_(qrmi),
      config_(config) {}

void Scheduler::log(VTime t, const std::string& job, const char* action,
                    const std::vector<NodeShare>& nodes,
                    const std::optional<std::string>& qpu,
                    const std::string& reason) {
  nlohmann::json entry{{"t", t.count()}, {"job", job}, {"action", action}};
  if (!nodes.empty()) {
    entry["nodes"] = nlohmann::json::array();
    for (const NodeShare& n : nodes) {
      entry["nodes"].push_back(
          {{"id", n.node_id}, {"cores", n.cores}, {"gpus", n.gpus}});
    }
  }
  if (qpu) entry["qpu"] = *qpu;
  if (!reason.empty()) entry["reason"] = reason;
  decisions_.push_back(std::move(entry));
}

int Scheduler::submit(const JobSpec& spec, JobBody body) {
  validate_job_spec(spec);
  if (records_.count(spec.id)) {
    raise(ErrorCode::InvalidSpec, "job id '" + spec.id + "' already submitted");
  }

  // Demand beyond total system capacity is rejected immediately.
  if (spec.classical.nodes > 0) {
    int capable = 0;
    for (const ResourceNode& n : topology_.nodes()) {
      if (n.kind != NodeKind::Qpu && n.cpu_cores >= spec.classical.cores_per_node &&
          n.gpu_units >= spec.classical.gpus_per_node) {
        ++capable;
      }
    }
    if (capable < spec.classical.nodes) {
      log(kernel_.now(), spec.id, "REJECT", {}, std::nullopt,
          "UnsatisfiableDemand: " + std::to_string(spec.classical.nodes) +
              " nodes demanded, " + std::to_string(capable) + " capable");
      raise(ErrorCode::UnsatisfiableDemand,
            "job '" + spec.id + "' demands more nodes than the system has");
    }
  }
  if (spec.kind != JobKind::Classical) {
    std::string why;
    if (!quantum_job_fits_some_device(spec, &why)) {
      log(kernel_.now(), spec.id, "REJECT", {}, std::nullopt,
          "UnsatisfiableDemand: " + why);
      raise(ErrorCode::UnsatisfiableDemand, "job '" + spec.id + "': " + why);
    }
  }

  const QueueKey key{-spec.priority, submit_seq_++, spec.id};
  queue_.emplace(key, spec.id);
  queue_key_.emplace(spec.id, key);
  if (body) {
    bodies_[spec.id] = std::move(body);
  } else {
    // Plain capacity job: occupy the allocation for its actual runtime.
    bodies_[spec.id] = [](std::shared_ptr<JobRuntime> rt) {
      Duration actual = rt->spec().estimated_runtime;
      if (rt->spec().params.contains("actual_runtime")) {
        const auto& v = rt->spec().params.at("actual_runtime");
        actual = v.is_string() ? parse_duration(v.get<std::string>())
                               : Duration(v.get<std::int64_t>());
      }
      rt->kernel().post_after(actual, rt->spec().id, "job-body-done",
                              [rt] { rt->finish(); });
    };
  }

  JobRecord rec;
  rec.spec = spec;
  rec.state = JobState::Queued;
  rec.submitted = kernel_.now();
  records_.emplace(spec.id, std::move(rec));
  ++counts_.submitted;
  ++counts_.queued;
  log(kernel_.now(), spec.id, "QUEUE", {}, std::nullopt, "");

  int position = 0;
  for (const auto& [k, id] : queue_) {
    if (id == spec.id) break;
    ++position;
  }
  return position;
}

bool Scheduler::quantum_job_fits_some_device(const JobSpec& spec,
                                             std::string* why) const {
  bool any_qpu = false;
  for (const ResourceNode& n : topology_.nodes()) {
    if (n.kind != NodeKind::Qpu) continue;
    any_qpu = true;
    if (n.qpu_qubits >= spec.qubits) return true;
  }
  if (why) {
    *why = any_qpu ? "no QPU with " + std::to_string(spec.qubits) + " qubits"
                   : "topology has no QPU";
  }
  return false;
}

PlacementVerdict Scheduler::placement_check(
    const JobSpec& spec, const std::optional<std::string>& qpu_id,
    const std::vector<std::string>& classical_nodes) const {
  if (spec.residency) {
    if (qpu_id && topology_.node(*qpu_id).residency_zone != *spec.residency) {
      return {false, ErrorCode::ResidencyViolation,
              "QPU " + *qpu_id + " outside zone " + *spec.residency};
    }
    for (const std::string& id : classical_nodes) {
      if (topology_.node(id).residency_zone != *spec.residency) {
        return {false, ErrorCode::ResidencyViolation,
                "node " + id + " outside zone " + *spec.residency};
      }
    }
  }
  if (qpu_id && spec.kind != JobKind::Classical) {
    for (const std::string& id : classical_nodes) {
      if (!topology_.connected(*qpu_id, id)) {
        return {false, ErrorCode::CouplingInfeasible,
                "no path " + *qpu_id + " -> " + id};
      }
      const CouplingClass actual =
          classify_coupling(topology_, *qpu_id, id, thresholds_);
      if (!coupling_satisfies(actual, spec.min_coupling)) {
        return {false, ErrorCode::CouplingInfeasible,
                "edge " + *qpu_id + "<->" + id + " is (" +
                    temporal_name(actual.temporal) + "," +
                    spatial_name(actual.spatial) + "), job needs (" +
                    temporal_name(spec.min_coupling.temporal) + "," +
                    spatial_name(spec.min_coupling.spatial) + ")"};
      }
    }
  }
  return {true, ErrorCode::CouplingInfeasible, ""};
}

PlacementVerdict Scheduler::static_feasibility(const JobSpec& spec) const {
  const bool wants_qpu = spec.kind != JobKind::Classical;
  const bool wants_nodes = spec.classical.nodes > 0;

  std::vector<std::string> qpus;
  if (wants_qpu) {
    bool any_capable = false;
    bool any_accessible = false;
    for (const auto& info : qrmi_.list_resources()) {
      if (info.qubits < spec.qubits) continue;
      any_capable = true;
      if (!info.accessible) continue;
      any_accessible = true;
      if (spec.residency &&
          topology_.node(info.id).residency_zone != *spec.residency) {
        continue;
      }
      qpus.push_back(info.id);
    }
    if (!any_capable) {
      return {false, ErrorCode::UnsatisfiableDemand, "no capable QPU"};
    }
    if (!any_accessible) {
      return {false, ErrorCode::ResourceInaccessible,
              "all capable QPUs inaccessible"};
    }
    if (qpus.empty()) {
      return {false, ErrorCode::ResidencyViolation,
              "no accessible QPU in zone " + *spec.residency};
    }
  }

  std::vector<std::string> nodes;
  if (wants_nodes) {
    bool any_capable = false;
    for (const std::string& id : topology_.classical_ids()) {
      const ResourceNode& n = topology_.node(id);
      if (n.cpu_cores < spec.classical.cores_per_node ||
          n.gpu_units < spec.classical.gpus_per_node) {
        continue;
      }
      any_capable = true;
      if (spec.residency && n.residency_zone != *spec.residency) continue;
      nodes.push_back(id);
    }
    if (static_cast<int>(nodes.size()) < spec.classical.nodes) {
      if (any_capable && spec.residency) {
        return {false, ErrorCode::ResidencyViolation,
                "fewer than " + std::to_string(spec.classical.nodes) +
                    " capable nodes in zone " + *spec.residency};
      }
      return {false, ErrorCode::UnsatisfiableDemand, "not enough capable nodes"};
    }
  }

  if (wants_qpu && wants_nodes) {
    for (const std::string& qpu : qpus) {
      int compatible = 0;
      for (const std::string& id : nodes) {
        if (!topology_.connected(qpu, id)) continue;
        const CouplingClass actual =
            classify_coupling(topology_, qpu, id, thresholds_);
        if (coupling_satisfies(actual, spec.min_coupling)) ++compatible;
      }
      if (compatible >= spec.classical.nodes) return {true, ErrorCode::CouplingInfeasible, ""};
    }
    return {false, ErrorCode::CouplingInfeasible,
            "no QPU has " + std::to_string(spec.classical.nodes) +
                " classical nodes at (" +
                temporal_name(spec.min_coupling.temporal) + "," +
                spatial_name(spec.min_coupling.spatial) + ") or better"};
  }
  return {true, ErrorCode::CouplingInfeasible, ""};
}

Profile Scheduler::running_profile(VTime now) const {
  Profile profile;
  for (const auto& [id, run] : running_) {
    const VTime planned_end = run.allocation.start + run.spec.estimated_runtime;
    // Past the estimate the only guaranteed bound is the overrun kill time.
    const VTime end = now < planned_end ? planned_end : run.kill_at;
    for (const NodeShare& share : run.allocation.nodes) {
      bookings_for(profile.node_bookings, share.node_id)
          .push_back({run.allocation.start, end, share.cores, share.gpus, id});
    }
    if (run.allocation.qpu_id) {
      bookings_for(profile.qpu_bookings, *run.allocation.qpu_id)
          .push_back({run.allocation.start, end, 0, 0, id});
    }
  }
  return profile;
}

std::optional<PlacementPlan> Scheduler::earliest_feasible(
    const Profile& profile, const Topology& topology,
    const CouplingThresholds& thresholds, const qrmi::Qrmi& qrmi,
    const JobSpec& spec, VTime not_before) {
  const bool wants_qpu = spec.kind != JobKind::Classical;
  const bool wants_nodes = spec.classical.nodes > 0;
  const Duration runtime = spec.estimated_runtime;

  std::vector<std::string> qpus;
  if (wants_qpu) {
    for (const auto& info : qrmi.list_resources()) {
      if (!info.accessible || info.qubits < spec.qubits) continue;
      if (spec.residency &&
          topology.node(info.id).residency_zone != *spec.residency) {
        continue;
      }
      qpus.push_back(info.id);
    }
    if (qpus.empty()) return std::nullopt;
  }

  std::vector<std::string> eligible;
  if (wants_nodes) {
    for (const std::string& id : topology.classical_ids()) {
      const ResourceNode& n = topology.node(id);
      if (n.cpu_cores < spec.classical.cores_per_node ||
          n.gpu_units < spec.classical.gpus_per_node) {
        continue;
      }
      if (spec.residency && n.residency_zone != *spec.residency) continue;
      eligible.push_back(id);
    }
    if (static_cast<int>(eligible.size()) < spec.classical.nodes) {
      return std::nullopt;
    }
  }

  // The earliest feasible start is `not_before` or some booking end.
  std::set<VTime> candidates{not_before};
  for (const auto& [id, bookings] : profile.node_bookings) {
    for (const Booking& b : bookings) {
      if (b.end > not_before) candidates.insert(b.end);
    }
  }
  for (const auto& [id, bookings] : profile.qpu_bookings) {
    for (const Booking& b : bookings) {
      if (b.end > not_before) candidates.insert(b.end);
    }
  }

  for (const VTime t : candidates) {
    const VTime t_end = t + runtime;
    auto try_nodes = [&](const std::optional<std::string>& qpu)
        -> std::optional<std::vector<NodeShare>> {
      std::vector<NodeShare> picked;
      if (!wants_nodes) return picked;
      for (const std::string& id : eligible) {
        if (qpu && wants_qpu) {
          if (!topology.connected(*qpu, id)) continue;
          const CouplingClass actual =
              classify_coupling(topology, *qpu, id, thresholds);
          if (!coupling_satisfies(actual, spec.min_coupling)) continue;
        }
        if (!node_has_capacity(topology.node(id),
                               bookings_for(profile.node_bookings, id),
                               spec.classical.cores_per_node,
                               spec.classical.gpus_per_node, t, t_end)) {
          continue;
        }
        picked.push_back(NodeShare{id, spec.classical.cores_per_node,
                                   spec.classical.gpus_per_node});
        if (static_cast<int>(picked.size()) == spec.classical.nodes) {
          return picked;
        }
      }
      return std::nullopt;
    };

    if (wants_qpu) {
      for (const std::string& qpu : qpus) {
        if (!interval_free(bookings_for(profile.qpu_bookings, qpu), t, t_end)) {
          continue;
        }
        const auto picked = try_nodes(qpu);
        if (!picked) continue;
        PlacementPlan plan;
        plan.start = t;
        plan.nodes = *picked;
        plan.qpu_id = qpu;
        return plan;
      }
    } else {
      const auto picked = try_nodes(std::nullopt);
      if (picked) {
        PlacementPlan plan;
        plan.start = t;
        plan.nodes = *picked;
        return plan;
      }
    }
  }
  return std::nullopt;
}

std::vector<Allocation> Scheduler::schedule_pass(VTime now) {
  std::vector<Allocation> started;
  Profile profile = running_profile(now);
  PassSnapshot snap;
  if (config_.record_pass_snapshots) {
    snap.t = now;
    snap.initial = profile;
  }

  const std::vector<std::pair<QueueKey, std::string>> queued(queue_.begin(),
                                                             queue_.end());
  bool any_waiting_ahead = false;
  for (const auto& [key, id] : queued) {
    JobRecord& rec = records_.at(id);
    if (config_.record_pass_snapshots) snap.queued_order.push_back(rec.spec);

    const PlacementVerdict verdict = static_feasibility(rec.spec);
    if (!verdict.feasible) {
      rec.diagnostic =
          std::string(error_code_name(verdict.reason)) + ": " + verdict.detail;
      any_waiting_ahead = true;
      continue;
    }
    const auto plan = earliest_feasible(profile, topology_, thresholds_, qrmi_,
                                        rec.spec, now);
    if (!plan) {
      rec.diagnostic = "no feasible window";
      any_waiting_ahead = true;
      continue;
    }

    // Book the reservation so later (lower-priority) jobs cannot delay it.
    const VTime end = plan->start + rec.spec.estimated_runtime;
    for (const NodeShare& share : plan->nodes) {
      bookings_for(profile.node_bookings, share.node_id)
          .push_back({plan->start, end, share.cores, share.gpus, id});
    }
    if (plan->qpu_id) {
      bookings_for(profile.qpu_bookings, *plan->qpu_id)
          .push_back({plan->start, end, 0, 0, id});
    }
    if (config_.record_pass_snapshots) snap.reserved_start[id] = plan->start;

    if (plan->start == now) {
      start_job(id, *plan, any_waiting_ahead);
      started.push_back(*records_.at(id).allocation);
      if (config_.record_pass_snapshots) snap.started.push_back(id);
    } else {
      rec.diagnostic = "reserved at t=" + std::to_string(plan->start.count());
      any_waiting_ahead = true;
    }
  }
  if (config_.record_pass_snapshots) snapshots_.push_back(std::move(snap));
  return started;
}

std::variant<Allocation, PlacementVerdict> Scheduler::co_allocate(
    const JobSpec& spec, VTime now) {
  if (spec.kind != JobKind::HybridClosedLoop) {
    raise(ErrorCode::InvalidSpec, "co_allocate needs a HybridClosedLoop spec");
  }
  validate_job_spec(spec);
  const PlacementVerdict verdict = static_feasibility(spec);
  if (!verdict.feasible) return verdict;

  const auto plan = earliest_feasible(running_profile(now), topology_,
                                      thresholds_, qrmi_, spec, now);
  if (!plan) {
    return PlacementVerdict{false, ErrorCode::CouplingInfeasible,
                            "no feasible co-allocation window"};
  }
  Allocation alloc;
  alloc.job_id = spec.id;
  alloc.nodes = plan->nodes;
  alloc.qpu_id = plan->qpu_id;
  alloc.start = plan->start;
  alloc.end = plan->start + spec.estimated_runtime;

  // Atomic start when the window opens now and the job is queued here.
  if (plan->start == now && queue_key_.count(spec.id)) {
    start_job(spec.id, *plan, false);
    return *records_.at(spec.id).allocation;
  }
  return alloc;
}

void Scheduler::start_job(const std::string& job_id, const PlacementPlan& plan,
                          bool backfill) {
  JobRecord& rec = records_.at(job_id);
  const VTime now = kernel_.now();
  assert(plan.start == now);

  Allocation alloc;
  alloc.job_id = job_id;
  alloc.nodes = plan.nodes;
  alloc.qpu_id = plan.qpu_id;
  alloc.start = now;
  alloc.end = now + rec.spec.estimated_runtime;

  const Duration kill_after = Duration(static_cast<std::int64_t>(
      config_.overrun_kill_factor *
      static_cast<double>(rec.spec.estimated_runtime.count())));
  const VTime kill_at = now + kill_after;

  if (plan.qpu_id) {
    const Duration lease = kill_after + std::chrono::milliseconds(1);
    alloc.token_id =
        qrmi_.acquire(*plan.qpu_id, job_id, lease).token_id;
  }

  queue_.erase(queue_key_.at(job_id));
  queue_key_.erase(job_id);
  --counts_.queued;
  ++counts_.running;

  rec.state = JobState::Running;
  rec.started = now;
  rec.allocation = alloc;
  rec.diagnostic.clear();

  RunningJob run;
  run.spec = rec.spec;
  run.allocation = alloc;
  run.kill_at = kill_at;
  run.runtime = std::shared_ptr<JobRuntime>(
      new JobRuntime(*this, rec.spec, alloc));
  running_.emplace(job_id, run);

  log(now, job_id, backfill ? "BACKFILL" : "START", alloc.nodes, alloc.qpu_id,
      "");

  kernel_.post(kill_at, "sched", "overrun-kill", [this, job_id, now] {
    const auto it = running_.find(job_id);
    if (it == running_.end() || it->second.allocation.start != now) return;
    end_job(job_id, JobState::Failed, "Overrun: killed at 2x estimate", "KILL");
  });

  const auto body = bodies_.find(job_id);
  if (body != bodies_.end() && body->second) {
    body->second(run.runtime);
  } else {
    complete_job(job_id);
  }
}

void Scheduler::end_job(const std::string& job_id, JobState final_state,
                        const std::string& reason, const char* action) {
  const auto it = running_.find(job_id);
  if (it == running_.end()) return;
  RunningJob& run = it->second;
  run.runtime->alive_ = false;

  if (run.allocation.token_id && qrmi_.token_live(*run.allocation.token_id)) {
    qrmi_.release(*run.allocation.token_id);
  }

  JobRecord& rec = records_.at(job_id);
  rec.state = final_state;
  rec.ended = kernel_.now();
  rec.failure = reason;
  rec.allocation->end = kernel_.now();

  --counts_.running;
  switch (final_state) {
    case JobState::Completed: ++counts_.completed; break;
    case JobState::Failed: ++counts_.failed; break;
    case JobState::Cancelled: ++counts_.cancelled; break;
    default: break;
  }
  log(kernel_.now(), job_id, action, run.allocation.nodes,
      run.allocation.qpu_id, reason);
  running_.erase(it);
  bodies_.erase(job_id);
}

void Scheduler::complete_job(const std::string& job_id) {
  end_job(job_id, JobState::Completed, "", "END");
}

void Scheduler::fail_job(const std::string& job_id, ErrorCode code,
                         const std::string& detail) {
  end_job(job_id, JobState::Failed,
          std::string(error_code_name(code)) + ": " + detail, "END");
}

bool Scheduler::conservation_holds() const {
  return counts_.submitted == counts_.queued + counts_.running +
                                  counts_.completed + counts_.failed +
                                  counts_.cancelled;
}

const JobRecord& Scheduler::record(const std::string& job_id) const {
  const auto it = records_.find(job_id);
  if (it == records_.end()) {
    raise(ErrorCode::UnknownJob, "no job '" + job_id + "'");
  }
  return it->second;
}

void Scheduler::start_periodic_passes() {
  if (pass_scheduled_) return;
  const std::int64_t period = config_.pass_period.count();
  const std::int64_t now = kernel_.now().count();
  const VTime next{(now / period + 1) * period};
  pass_scheduled_ = true;
  kernel_.post(next, "sched", "schedule-pass", [this] {
    pass_scheduled_ = false;
    schedule_pass(kernel_.now());
    // Keep cycling while progress is possible.
    bool queued_startable = false;
    for (const auto& [key, id] : queue_) {
      if (static_feasibility(records_.at(id).spec).feasible) {
        queued_startable = true;
        break;
      }
    }
    if (queued_startable || !running_.empty()) start_periodic_passes();
  });
}

}  // namespace qcsc::sched
