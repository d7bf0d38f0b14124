#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qcsc/qrmi/qrmi.hpp"
#include "qcsc/sim/kernel.hpp"
#include "qcsc/tcg/placement.hpp"

namespace qcsc::tcg {

// Value flowing along an edge; `kind` selects the payload.
struct Tensor {
  TensorKind kind = TensorKind::RealTensor;
  qpu::SampleSet table;        // BitstringTable
  std::vector<double> values;  // RealTensor / ParamVector
};

using ClassicalFn =
    std::function<std::vector<Tensor>(const std::vector<Tensor>&)>;

class FunctionRegistry {
 public:
  void add(const std::string& name, ClassicalFn fn);
  bool contains(const std::string& name) const;
  const ClassicalFn& get(const std::string& name) const;  // UnknownJob-free: throws ValidationError

 private:
  std::map<std::string, ClassicalFn> fns_;
};

struct NodeTiming {
  std::string node;
  std::string resource;
  VTime start{0};
  VTime end{0};
};

struct ExecutionResult {
  bool ok = false;
  ErrorCode error = ErrorCode::NodeFailure;
  std::string error_detail;
  std::map<std::string, std::vector<Tensor>> sink_outputs;  // by node, port-indexed
  std::vector<NodeTiming> timings;                          // completion order
  VTime started{0};
  VTime finished{0};
};

struct ExecutionSession {
  qrmi::Qrmi* qrmi = nullptr;
  // QPU resource id -> live acquisition token.
  std::map<std::string, std::string> qpu_tokens;
  std::uint64_t seed = 0;
  std::string rng_scope = "tcg";
};

// Runs the graph on the kernel: each node executes exactly once when all of
// its inputs have arrived; QuantumCircuit nodes go through qrmi.submit_job on
// their placed QPU's token; every edge traversal is a kernel transfer of the
// edge's declared bytes; ClassicalOp durations come from their cost models,
// serialized per resource. on_done receives the sink outputs and per-node
// timings, or the first NodeFailure (downstream nodes never run).
void execute(const TensorComputeGraph& graph, const PlacementMap& placement,
             sim::SimKernel& kernel, ExecutionSession session,
             const FunctionRegistry& registry,
             std::function<void(ExecutionResult)> on_done);

}  // namespace qcsc::tcg
