#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsc/errors.hpp"
#include "qcsc/qpu/circuit.hpp"
#include "qcsc/sim/rng.hpp"
#include "qcsc/time.hpp"

namespace qcsc::tcg {

enum class TensorKind { BitstringTable, RealTensor, ParamVector };
const char* tensor_kind_name(TensorKind kind);
TensorKind tensor_kind_from_string(const std::string& name);

enum class TcgNodeKind { QuantumCircuit, Twirl, ClassicalOp };
const char* node_kind_name(TcgNodeKind kind);
TcgNodeKind tcg_node_kind_from_string(const std::string& name);

enum class Tier { QPU, ScaleUp, ScaleOut };
const char* tier_name(Tier tier);
Tier tier_from_string(const std::string& name);

// Affine classical cost model: base + per_byte_ns * total input bytes.
struct CostModel {
  Duration base{std::chrono::milliseconds(1)};
  double per_byte_ns = 0.0;

  Duration eval(std::uint64_t input_bytes) const;
};

// Parameter-randomization spec: `count` copies of the base circuit with each
// theta component perturbed uniformly within +-amplitude.
struct TwirlSpec {
  qpu::CircuitSpec base;
  int count = 0;
  double amplitude = 0.0;
};

struct ClassicalOpSpec {
  std::string function;  // registry name resolved at execution
  CostModel cost;
};

struct TcgNode {
  std::string id;
  TcgNodeKind kind = TcgNodeKind::ClassicalOp;
  std::optional<qpu::CircuitSpec> circuit;    // QuantumCircuit
  std::optional<TwirlSpec> twirl;             // Twirl
  std::optional<ClassicalOpSpec> classical;   // ClassicalOp
  std::optional<Tier> placement_hint;
};

struct PortRef {
  std::string node;
  int port = 0;

  bool operator==(const PortRef&) const = default;
  auto operator<=>(const PortRef&) const = default;
};

struct TensorEdge {
  PortRef from;
  PortRef to;
  TensorKind kind = TensorKind::RealTensor;
  std::uint64_t bytes = 0;
};

struct TensorComputeGraph {
  std::string name;
  std::string owner_job;
  std::vector<TcgNode> nodes;
  std::vector<TensorEdge> edges;

  const TcgNode* find_node(const std::string& id) const;
};

struct Diagnostic {
  ErrorCode code = ErrorCode::ValidationError;
  std::string detail;
};

// Checks acyclicity, endpoint existence, port typing and the
// single-producer rule; returns every violation (empty means valid).
std::vector<Diagnostic> validate(const TensorComputeGraph& graph);

// Node ids in a deterministic topological order. Requires a valid graph.
std::vector<std::string> topological_order(const TensorComputeGraph& graph);

// Expands a Twirl node into `count` CircuitSpecs differing only in theta;
// deterministic under the rng stream.
std::vector<qpu::CircuitSpec> twirl_expand(const TcgNode& node,
                                           sim::RngStream& rng);

nlohmann::json graph_to_json(const TensorComputeGraph& graph);
TensorComputeGraph graph_from_json(const nlohmann::json& j);

}  // namespace qcsc::tcg
