#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsc/errors.hpp"
#include "qcsc/time.hpp"

namespace qcsc {

enum class NodeKind { Qpu, ScaleUpNode, ScaleOutNode };

const char* node_kind_name(NodeKind kind);
NodeKind node_kind_from_string(const std::string& name);

struct ResourceNode {
  std::string id;
  NodeKind kind = NodeKind::ScaleOutNode;
  int cpu_cores = 0;
  int gpu_units = 0;
  int qpu_qubits = 0;
  std::string residency_zone;
  Duration service_overhead{0};  // fixed per-request processing time
};

// Bidirectional interconnect between two nodes.
struct Link {
  std::string a;
  std::string b;
  Duration latency{0};                 // one-way
  std::uint64_t bandwidth_bps = 0;     // bytes per second
};

// The three-tier compute fabric. Immutable after build(); safe to share
// across concurrent readers. Min-latency paths between all node pairs are
// precomputed at construction.
class Topology {
 public:
  static Topology build(std::vector<ResourceNode> nodes, std::vector<Link> links);

  const std::vector<ResourceNode>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }

  bool has_node(const std::string& id) const;
  const ResourceNode& node(const std::string& id) const;

  bool connected(const std::string& a, const std::string& b) const;
  // Minimum total latency over all paths a -> b. Throws NoPath.
  Duration path_latency(const std::string& a, const std::string& b) const;
  // Minimum link bandwidth along the chosen min-latency path. Throws NoPath.
  std::uint64_t bottleneck_bandwidth(const std::string& a,
                                     const std::string& b) const;

  std::vector<std::string> qpu_ids() const;
  std::vector<std::string> classical_ids() const;  // sorted

 private:
  Topology() = default;
  std::size_t index(const std::string& id) const;

  std::vector<ResourceNode> nodes_;
  std::vector<Link> links_;
  std::map<std::string, std::size_t> index_;
  // Dense all-pairs tables; nodes_.size() is small by construction.
  std::vector<std::int64_t> latency_ns_;       // -1 where unreachable
  std::vector<std::uint64_t> bottleneck_bps_;  // 0 where unreachable
};

// Builds and validates a Topology from a scenario fragment:
//   {"nodes":[{"id","kind","cpu_cores","gpu_units","qpu_qubits",
//              "residency_zone","service_overhead"}],
//    "links":[{"a","b","latency","bandwidth_bps"}]}
// Errors: DuplicateId, DanglingLink, IsolatedQpu, ParseError.
Topology build_topology(const nlohmann::json& config);

nlohmann::json topology_to_json(const Topology& topology);

}  // namespace qcsc
