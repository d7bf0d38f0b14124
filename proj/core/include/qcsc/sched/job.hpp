#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsc/model/coupling.hpp"
#include "qcsc/time.hpp"

namespace qcsc::sched {

enum class JobKind { Classical, Quantum, HybridClosedLoop };
const char* job_kind_name(JobKind kind);
JobKind job_kind_from_string(const std::string& name);

struct ClassicalDemand {
  int nodes = 0;
  int cores_per_node = 0;
  int gpus_per_node = 0;
};

struct JobSpec {
  std::string id;
  JobKind kind = JobKind::Classical;
  int priority = 0;  // higher runs first
  ClassicalDemand classical;
  int qubits = 0;
  Duration estimated_runtime{0};
  CouplingClass min_coupling;  // weakest acceptable QPU<->node coupling
  std::optional<std::string> residency;
  std::string workload;  // payload binding; empty for plain capacity jobs
  nlohmann::json params = nlohmann::json::object();
};

// Throws InvalidSpec.
void validate_job_spec(const JobSpec& spec);

enum class JobState { Queued, Running, Completed, Failed, Cancelled };
const char* job_state_name(JobState s);

struct NodeShare {
  std::string node_id;
  int cores = 0;
  int gpus = 0;
};

struct Allocation {
  std::string job_id;
  std::vector<NodeShare> nodes;
  std::optional<std::string> qpu_id;
  std::optional<std::string> token_id;
  VTime start{0};
  VTime end{0};  // planned end (start + estimate)
};

struct JobRecord {
  JobSpec spec;
  JobState state = JobState::Queued;
  VTime submitted{0};
  VTime started{0};
  VTime ended{0};
  std::optional<Allocation> allocation;
  std::string failure;     // reason for Failed/Cancelled
  std::string diagnostic;  // last placement diagnostic while queued
};

nlohmann::json job_spec_to_json(const JobSpec& spec);
JobSpec job_spec_from_json(const nlohmann::json& j);

}  // namespace qcsc::sched
