#pragma once

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "qcsc/qrmi/qrmi.hpp"
#include "qcsc/sched/job.hpp"
#include "qcsc/sim/kernel.hpp"

namespace qcsc::sched {

struct Booking {
  VTime start{0};
  VTime end{0};
  int cores = 0;
  int gpus = 0;
  std::string job_id;
};

// Capacity timeline used for reservations: per classical node and per QPU.
struct Profile {
  std::map<std::string, std::vector<Booking>> node_bookings;
  std::map<std::string, std::vector<Booking>> qpu_bookings;
};

struct PlacementPlan {
  VTime start{0};
  std::vector<NodeShare> nodes;
  std::optional<std::string> qpu_id;
};

struct PlacementVerdict {
  bool feasible = true;
  ErrorCode reason = ErrorCode::CouplingInfeasible;
  std::string detail;
};

class Scheduler;

// Handle given to a running job's body. Bodies drive kernel events and must
// eventually call finish() or fail(); after a kill or cancel, alive() turns
// false and late events must no-op.
class JobRuntime {
 public:
  sim::SimKernel& kernel();
  qrmi::Qrmi& qrmi();
  const Allocation& allocation() const { return allocation_; }
  const JobSpec& spec() const { return spec_; }
  bool alive() const { return alive_; }
  VTime window_end() const { return allocation_.end; }
  sim::RngStream rng(std::string_view suffix) const;

  void finish();
  void fail(ErrorCode code, const std::string& detail);

 private:
  friend class Scheduler;
  JobRuntime(Scheduler& scheduler, JobSpec spec, Allocation allocation);

  Scheduler& scheduler_;
  JobSpec spec_;
  Allocation allocation_;
  bool alive_ = true;
};

using JobBody = std::function<void(std::shared_ptr<JobRuntime>)>;

struct SchedulerConfig {
  Duration pass_period{std::chrono::milliseconds(100)};
  double overrun_kill_factor = 2.0;
  std::uint64_t seed = 0;
  bool record_pass_snapshots = false;
};

struct PassSnapshot {
  VTime t{0};
  Profile initial;  // running bookings only
  std::vector<JobSpec> queued_order;
  std::map<std::string, VTime> reserved_start;
  std::vector<std::string> started;
};

struct JobCounts {
  int submitted = 0;
  int queued = 0;
  int running = 0;
  int completed = 0;
  int failed = 0;
  int cancelled = 0;
};

// Quantum-aware workload manager: priority queues with deterministic
// tie-breaking (priority desc, submit asc, id asc), conservative
// backfilling over estimate-based reservations, coupling/residency placement
// checks, and atomic QPU+HPC co-allocation for closed-loop jobs. State is
// mutated only inside kernel events; queries are read-only snapshots.
class Scheduler {
 public:
  Scheduler(sim::SimKernel& kernel, const Topology& topology,
            const CouplingThresholds& thresholds, qrmi::Qrmi& qrmi,
            SchedulerConfig config = {});

  // Enqueues the job and returns its position in the queue ordering.
  // Errors: InvalidSpec, UnsatisfiableDemand (rejected immediately).
  int submit(const JobSpec& spec, JobBody body = {});

  // One scheduling cycle at `now`: rebuilds reservations for every queued
  // job in priority order and starts those whose earliest feasible start is
  // now. Jobs that cannot place stay queued with a diagnostic.
  std::vector<Allocation> schedule_pass(VTime now);

  // Earliest window where the QPU and the classical nodes are simultaneously
  // free for the spec's estimated runtime; books both (all-or-nothing). The
  // reservation does not idle the classical nodes before its start.
  std::variant<Allocation, PlacementVerdict> co_allocate(const JobSpec& spec,
                                                         VTime now);

  // Verifies coupling between the QPU and each candidate classical node
  // against the spec's minimum, and residency labels when constrained.
  PlacementVerdict placement_check(
      const JobSpec& spec, const std::optional<std::string>& qpu_id,
      const std::vector<std::string>& classical_nodes) const;

  // Static feasibility against the bare topology (ignoring time): residency,
  // coupling, device accessibility.
  PlacementVerdict static_feasibility(const JobSpec& spec) const;

  // Posts periodic schedule-pass events on the pass_period grid; each pass
  // reposts itself while any job is queued or running.
  void start_periodic_passes();

  JobCounts counts() const { return counts_; }
  bool conservation_holds() const;
  const std::map<std::string, JobRecord>& records() const { return records_; }
  const JobRecord& record(const std::string& job_id) const;
  const std::vector<nlohmann::json>& decision_log() const { return decisions_; }
  const std::vector<PassSnapshot>& pass_snapshots() const { return snapshots_; }
  const SchedulerConfig& config() const { return config_; }

  // Pure earliest-start search over an explicit profile; also used by the
  // priority-safety verification in tests.
  static std::optional<PlacementPlan> earliest_feasible(
      const Profile& profile, const Topology& topology,
      const CouplingThresholds& thresholds, const qrmi::Qrmi& qrmi,
      const JobSpec& spec, VTime not_before);

  // Completion interface used by JobRuntime.
  void complete_job(const std::string& job_id);
  void fail_job(const std::string& job_id, ErrorCode code,
                const std::string& detail);

 private:
  friend class JobRuntime;

  struct RunningJob {
    JobSpec spec;
    Allocation allocation;
    std::shared_ptr<JobRuntime> runtime;
    VTime kill_at{0};
  };

  Profile running_profile(VTime now) const;
  void start_job(const std::string& job_id, const PlacementPlan& plan,
                 bool backfill);
  void end_job(const std::string& job_id, JobState final_state,
               const std::string& reason, const char* action);
  void log(VTime t, const std::string& job, const char* action,
           const std::vector<NodeShare>& nodes,
           const std::optional<std::string>& qpu, const std::string& reason);
  bool quantum_job_fits_some_device(const JobSpec& spec, std::string* why) const;

  sim::SimKernel& kernel_;
  const Topology& topology_;
  CouplingThresholds thresholds_;
  qrmi::Qrmi& qrmi_;
  SchedulerConfig config_;

  // Queue ordering key: (-priority, submit sequence, id).
  struct QueueKey {
    int neg_priority;
    std::uint64_t submit_seq;
    std::string id;
    auto operator<=>(const QueueKey&) const = default;
  };
  std::map<QueueKey, std::string> queue_;
  std::map<std::string, QueueKey> queue_key_;
  std::map<std::string, JobBody> bodies_;
  std::map<std::string, RunningJob> running_;
  std::map<std::string, JobRecord> records_;
  JobCounts counts_;
  std::vector<nlohmann::json> decisions_;
  std::vector<PassSnapshot> snapshots_;
  std::uint64_t submit_seq_ = 0;
  bool pass_scheduled_ = false;
};

}  // namespace qcsc::sched
