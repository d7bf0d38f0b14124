#include "qcsc/tcg/engine.hpp"

#include <algorithm>

namespace qcsc::tcg {

void FunctionRegistry::add(const std::string& name, ClassicalFn fn) {
  fns_[name] = std::move(fn);
}

bool FunctionRegistry::contains(const std::string& name) const {
  return fns_.count(name) > 0;
}

const ClassicalFn& FunctionRegistry::get(const std::string& name) const {
  const auto it = fns_.find(name);
  if (it == fns_.end()) {
    raise(ErrorCode::ValidationError,
          "no classical function '" + name + "' registered");
  }
  return it->second;
}

namespace {

struct NodeState {
  const TcgNode* node = nullptr;
  std::string resource;
  int missing_inputs = 0;
  std::map<int, Tensor> inputs;          // port -> value
  std::uint64_t input_bytes = 0;
  std::vector<const TensorEdge*> out_edges;
  bool dispatched = false;
};

struct Engine : std::enable_shared_from_this<Engine> {
  TensorComputeGraph graph;
  PlacementMap placement;
  sim::SimKernel& kernel;
  ExecutionSession session;
  const FunctionRegistry& registry;
  std::function<void(ExecutionResult)> on_done;

  std::map<std::string, NodeState> states;
  std::map<std::string, VTime> resource_free_at;
  ExecutionResult result;
  std::size_t remaining = 0;
  bool dead = false;

  Engine(const TensorComputeGraph& g, const PlacementMap& p,
         sim::SimKernel& k, ExecutionSession s, const FunctionRegistry& r,
         std::function<void(ExecutionResult)> cb)
      : graph(g), placement(p), kernel(k), session(std::move(s)), registry(r),
        on_done(std::move(cb)) {}

  void fail(ErrorCode code, const std::string& detail) {
    if (dead) return;
    dead = true;
    result.ok = false;
    result.error = code;
    result.error_detail = detail;
    result.finished = kernel.now();
    on_done(std::move(result));
  }

  void start() {
    result.started = kernel.now();
    for (const TcgNode& n : graph.nodes) {
      NodeState st;
      st.node = &n;
      st.resource = placement.at(n.id);
      states.emplace(n.id, std::move(st));
    }
    for (const TensorEdge& e : graph.edges) {
      states.at(e.to.node).missing_inputs += 1;
      states.at(e.to.node).input_bytes += e.bytes;
      states.at(e.from.node).out_edges.push_back(&e);
    }
    remaining = graph.nodes.size();
    // Sources dispatch in deterministic id order.
    for (const std::string& id : topological_order(graph)) {
      if (states.at(id).missing_inputs == 0) dispatch(id);
    }
  }

  void deliver(const std::string& node_id, int port, Tensor value) {
    if (dead) return;
    NodeState& st = states.at(node_id);
    st.inputs.emplace(port, std::move(value));
    if (--st.missing_inputs == 0) dispatch(node_id);
  }

  void dispatch(const std::string& node_id) {
    if (dead) return;
    NodeState& st = states.at(node_id);
    if (st.dispatched) return;
    st.dispatched = true;
    switch (st.node->kind) {
      case TcgNodeKind::QuantumCircuit: run_quantum(node_id); break;
      case TcgNodeKind::Twirl: run_twirl(node_id); break;
      case TcgNodeKind::ClassicalOp: run_classical(node_id); break;
    }
  }

  void run_quantum(const std::string& node_id) {
    NodeState& st = states.at(node_id);
    if (session.qrmi == nullptr) {
      fail(ErrorCode::NodeFailure,
           "node '" + node_id + "': no QRMI session for quantum execution");
      return;
    }
    const auto token = session.qpu_tokens.find(st.resource);
    if (token == session.qpu_tokens.end()) {
      fail(ErrorCode::NodeFailure,
           "node '" + node_id + "': no token for QPU " + st.resource);
      return;
    }
    qpu::CircuitSpec circuit = *st.node->circuit;
    const auto theta_in = st.inputs.find(0);
    if (theta_in != st.inputs.end()) {
      circuit.theta = theta_in->second.values;
      if (circuit.kind == qpu::CircuitKind::GroundStateSampler) {
        circuit.kind = qpu::CircuitKind::ParameterizedSampler;
      }
    }
    if (circuit.rng_stream.empty()) {
      circuit.rng_stream = session.rng_scope + "/node/" + node_id;
    }
    const VTime submit_time = kernel.now();
    auto self = shared_from_this();
    qrmi::SubmitOptions options;
    options.on_terminal = [self, node_id,
                           submit_time](const qrmi::QuantumJobHandle& handle) {
      if (self->dead) return;
      if (handle.state != qrmi::JobState::Done) {
        self->fail(ErrorCode::NodeFailure,
                   "node '" + node_id + "': device job " + handle.job_id +
                       " ended " + qrmi::job_state_name(handle.state));
        return;
      }
      Tensor out;
      out.kind = TensorKind::BitstringTable;
      out.table = self->session.qrmi->fetch_results(handle.job_id);
      self->complete(node_id, submit_time, {std::move(out)});
    };
    try {
      session.qrmi->submit_job(token->second, circuit, options);
    } catch (const Error& e) {
      fail(ErrorCode::NodeFailure, "node '" + node_id + "': " + e.what());
    }
  }

  void run_twirl(const std::string& node_id) {
    NodeState& st = states.at(node_id);
    auto rng = sim::RngStream(session.seed,
                              session.rng_scope + "/twirl/" + node_id);
    const std::vector<qpu::CircuitSpec> variants =
        twirl_expand(*st.node, rng);
    std::vector<Tensor> outputs;
    outputs.reserve(variants.size());
    for (const qpu::CircuitSpec& v : variants) {
      Tensor t;
      t.kind = TensorKind::ParamVector;
      t.values = v.theta;
      outputs.push_back(std::move(t));
    }
    complete(node_id, kernel.now(), std::move(outputs));
  }

  void run_classical(const std::string& node_id) {
    NodeState& st = states.at(node_id);
    const Duration duration = st.node->classical->cost.eval(st.input_bytes);
    const VTime ready = kernel.now();
    const VTime start = std::max(ready, resource_free_at[st.resource]);
    const VTime end = start + duration;
    resource_free_at[st.resource] = end;
    auto self = shared_from_this();
    kernel.post(end, st.resource, "tcg-node:" + node_id, [self, node_id, start] {
      if (self->dead) return;
      NodeState& s = self->states.at(node_id);
      std::vector<Tensor> inputs;
      for (const auto& [port, tensor] : s.inputs) inputs.push_back(tensor);
      std::vector<Tensor> outputs;
      try {
        outputs = self->registry.get(s.node->classical->function)(inputs);
      } catch (const std::exception& e) {
        self->fail(ErrorCode::NodeFailure,
                   "node '" + node_id + "': " + e.what());
        return;
      }
      self->complete(node_id, start, std::move(outputs));
    });
  }

  void complete(const std::string& node_id, VTime start,
                std::vector<Tensor> outputs) {
    if (dead) return;
    NodeState& st = states.at(node_id);
    result.timings.push_back(
        NodeTiming{node_id, st.resource, start, kernel.now()});

    if (st.out_edges.empty()) {
      result.sink_outputs[node_id] = std::move(outputs);
    } else {
      auto self = shared_from_this();
      for (const TensorEdge* e : st.out_edges) {
        const std::size_t port = static_cast<std::size_t>(e->from.port);
        if (port >= outputs.size()) {
          fail(ErrorCode::NodeFailure,
               "node '" + node_id + "' produced no output for port " +
                   std::to_string(e->from.port));
          return;
        }
        Tensor value = outputs[port];
        const std::string dst = states.at(e->to.node).resource;
        const std::string to_node = e->to.node;
        const int to_port = e->to.port;
        kernel.transfer(st.resource, dst, e->bytes,
                        "tcg-edge:" + edge_key(*e),
                        [self, to_node, to_port, value = std::move(value)] {
                          self->deliver(to_node, to_port, value);
                        });
      }
    }

    if (--remaining == 0) {
      result.ok = true;
      result.finished = kernel.now();
      dead = true;
      on_done(std::move(result));
    }
  }
};

}  // namespace

void execute(const TensorComputeGraph& graph, const PlacementMap& placement,
             sim::SimKernel& kernel, ExecutionSession session,
             const FunctionRegistry& registry,
             std::function<void(ExecutionResult)> on_done) {
  const std::vector<Diagnostic> diags = validate(graph);
  if (!diags.empty()) {
    raise(diags.front().code, "invalid graph: " + diags.front().detail);
  }
  for (const TcgNode& n : graph.nodes) {
    if (!placement.count(n.id)) {
      raise(ErrorCode::PlacementInfeasible,
            "placement is missing node '" + n.id + "'");
    }
  }
  auto engine = std::make_shared<Engine>(graph, placement, kernel,
                                         std::move(session), registry,
                                         std::move(on_done));
  engine->start();
}

}  // namespace qcsc::tcg
