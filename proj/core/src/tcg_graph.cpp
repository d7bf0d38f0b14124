#include "qcsc/tcg/graph.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace qcsc::tcg {

const char* tensor_kind_name(TensorKind kind) {
  switch (kind) {
    case TensorKind::BitstringTable: return "BitstringTable";
    case TensorKind::RealTensor: return "RealTensor";
    case TensorKind::ParamVector: return "ParamVector";
  }
  return "?";
}

TensorKind tensor_kind_from_string(const std::string& name) {
  if (name == "BitstringTable") return TensorKind::BitstringTable;
  if (name == "RealTensor") return TensorKind::RealTensor;
  if (name == "ParamVector") return TensorKind::ParamVector;
  raise(ErrorCode::ParseError, "unknown tensor kind '" + name + "'");
}

const char* node_kind_name(TcgNodeKind kind) {
  switch (kind) {
    case TcgNodeKind::QuantumCircuit: return "QuantumCircuit";
    case TcgNodeKind::Twirl: return "Twirl";
    case TcgNodeKind::ClassicalOp: return "ClassicalOp";
  }
  return "?";
}

TcgNodeKind tcg_node_kind_from_string(const std::string& name) {
  if (name == "QuantumCircuit") return TcgNodeKind::QuantumCircuit;
  if (name == "Twirl") return TcgNodeKind::Twirl;
  if (name == "ClassicalOp") return TcgNodeKind::ClassicalOp;
  raise(ErrorCode::ParseError, "unknown TCG node kind '" + name + "'");
}

const char* tier_name(Tier tier) {
  switch (tier) {
    case Tier::QPU: return "QPU";
    case Tier::ScaleUp: return "ScaleUp";
    case Tier::ScaleOut: return "ScaleOut";
  }
  return "?";
}

Tier tier_from_string(const std::string& name) {
  if (name == "QPU") return Tier::QPU;
  if (name == "ScaleUp") return Tier::ScaleUp;
  if (name == "ScaleOut") return Tier::ScaleOut;
  raise(ErrorCode::ParseError, "unknown tier '" + name + "'");
}

Duration CostModel::eval(std::uint64_t input_bytes) const {
  const double extra = per_byte_ns * static_cast<double>(input_bytes);
  return base + Duration(static_cast<std::int64_t>(std::llround(extra)));
}

const TcgNode* TensorComputeGraph::find_node(const std::string& id) const {
  for (const TcgNode& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

namespace {

// Expected tensor kind of a typed node's port, if the node constrains it.
std::optional<TensorKind> output_kind(const TcgNode& node) {
  switch (node.kind) {
    case TcgNodeKind::QuantumCircuit: return TensorKind::BitstringTable;
    case TcgNodeKind::Twirl: return TensorKind::ParamVector;
    case TcgNodeKind::ClassicalOp: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<TensorKind> input_kind(const TcgNode& node) {
  switch (node.kind) {
    case TcgNodeKind::QuantumCircuit: return TensorKind::ParamVector;
    case TcgNodeKind::Twirl: return std::nullopt;  // Twirl takes no inputs
    case TcgNodeKind::ClassicalOp: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

std::vector<Diagnostic> validate(const TensorComputeGraph& graph) {
  std::vector<Diagnostic> diags;
  std::map<std::string, const TcgNode*> by_id;
  for (const TcgNode& n : graph.nodes) {
    if (!by_id.emplace(n.id, &n).second) {
      diags.push_back({ErrorCode::DuplicateId, "node id '" + n.id + "'"});
    }
    switch (n.kind) {
      case TcgNodeKind::QuantumCircuit:
        if (!n.circuit) {
          diags.push_back({ErrorCode::ValidationError,
                           "QuantumCircuit node '" + n.id + "' has no circuit"});
        }
        if (n.placement_hint && *n.placement_hint != Tier::QPU) {
          diags.push_back({ErrorCode::PlacementInfeasible,
                           "QuantumCircuit node '" + n.id +
                               "' may only be placed on a QPU"});
        }
        break;
      case TcgNodeKind::Twirl:
        if (!n.twirl || n.twirl->count < 0) {
          diags.push_back({ErrorCode::ValidationError,
                           "Twirl node '" + n.id + "' has no valid spec"});
        }
        break;
      case TcgNodeKind::ClassicalOp:
        if (!n.classical || n.classical->function.empty()) {
          diags.push_back({ErrorCode::ValidationError,
                           "ClassicalOp node '" + n.id + "' has no function"});
        } else if (n.classical->cost.base <= Duration{0} &&
                   n.classical->cost.per_byte_ns <= 0.0) {
          diags.push_back({ErrorCode::ValidationError,
                           "ClassicalOp node '" + n.id +
                               "' cost model must yield positive durations"});
        }
        break;
    }
  }

  std::set<PortRef> consumed;
  for (const TensorEdge& e : graph.edges) {
    const auto from = by_id.find(e.from.node);
    const auto to = by_id.find(e.to.node);
    if (from == by_id.end() || to == by_id.end()) {
      diags.push_back({ErrorCode::DanglingEdge,
                       "edge " + e.from.node + " -> " + e.to.node +
                           " references a missing node"});
      continue;
    }
    if (e.from.node == e.to.node) {
      diags.push_back({ErrorCode::CycleDetected,
                       "self-loop on node '" + e.from.node + "'"});
    }
    if (e.bytes == 0) {
      diags.push_back({ErrorCode::ValidationError,
                       "edge " + e.from.node + " -> " + e.to.node +
                           " must declare size > 0"});
    }
    if (!consumed.insert(e.to).second) {
      diags.push_back({ErrorCode::MultipleProducers,
                       "input port " + e.to.node + ":" +
                           std::to_string(e.to.port) +
                           " has more than one incoming edge"});
    }
    const auto out_kind = output_kind(*from->second);
    if (out_kind && e.kind != *out_kind) {
      diags.push_back(
          {ErrorCode::PortKindMismatch,
           "edge " + e.from.node + " -> " + e.to.node + " carries " +
               tensor_kind_name(e.kind) + " but producer emits " +
               tensor_kind_name(*out_kind)});
    }
    const auto in_kind = input_kind(*to->second);
    if (in_kind && e.kind != *in_kind) {
      diags.push_back(
          {ErrorCode::PortKindMismatch,
           "edge " + e.from.node + " -> " + e.to.node + " carries " +
               tensor_kind_name(e.kind) + " but consumer expects " +
               tensor_kind_name(*in_kind)});
    }
    if (to->second->kind == TcgNodeKind::Twirl) {
      diags.push_back({ErrorCode::ValidationError,
                       "Twirl node '" + e.to.node + "' takes no inputs"});
    }
  }

  // Kahn's algorithm over distinct node-to-node edges.
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::string, int> indeg;
  for (const auto& [id, n] : by_id) indeg[id] = 0;
  for (const TensorEdge& e : graph.edges) {
    if (!by_id.count(e.from.node) || !by_id.count(e.to.node)) continue;
    if (e.from.node == e.to.node) continue;
    if (succ[e.from.node].insert(e.to.node).second) ++indeg[e.to.node];
  }
  std::vector<std::string> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.push_back(id);
  }
  std::size_t seen = 0;
  while (!ready.empty()) {
    const std::string id = ready.back();
    ready.pop_back();
    ++seen;
    for (const std::string& next : succ[id]) {
      if (--indeg[next] == 0) ready.push_back(next);
    }
  }
  if (seen != by_id.size()) {
    diags.push_back({ErrorCode::CycleDetected, "graph contains a cycle"});
  }
  return diags;
}

std::vector<std::string> topological_order(const TensorComputeGraph& graph) {
  std::map<std::string, std::set<std::string>> succ;
  std::map<std::string, int> indeg;
  for (const TcgNode& n : graph.nodes) indeg[n.id] = 0;
  for (const TensorEdge& e : graph.edges) {
    if (succ[e.from.node].insert(e.to.node).second) ++indeg[e.to.node];
  }
  // std::map iteration keeps the ready set deterministic (lowest id first).
  std::vector<std::string> order;
  std::set<std::string> ready;
  for (const auto& [id, d] : indeg) {
    if (d == 0) ready.insert(id);
  }
  while (!ready.empty()) {
    const std::string id = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(id);
    for (const std::string& next : succ[id]) {
      if (--indeg[next] == 0) ready.insert(next);
    }
  }
  if (order.size() != graph.nodes.size()) {
    raise(ErrorCode::CycleDetected, "topological_order on a cyclic graph");
  }
  return order;
}

std::vector<qpu::CircuitSpec> twirl_expand(const TcgNode& node,
                                           sim::RngStream& rng) {
  if (node.kind != TcgNodeKind::Twirl || !node.twirl) {
    raise(ErrorCode::InvalidSpec, "twirl_expand needs a Twirl node");
  }
  const TwirlSpec& spec = *node.twirl;
  std::vector<qpu::CircuitSpec> out;
  out.reserve(static_cast<std::size_t>(std::max(spec.count, 0)));
  for (int i = 0; i < spec.count; ++i) {
    qpu::CircuitSpec variant = spec.base;
    variant.id = spec.base.id + "#" + std::to_string(i);
    for (double& component : variant.theta) {
      component += spec.amplitude * (2.0 * rng.next_double() - 1.0);
    }
    out.push_back(std::move(variant));
  }
  return out;
}

nlohmann::json graph_to_json(const TensorComputeGraph& graph) {
  nlohmann::json j{{"name", graph.name}, {"owner_job", graph.owner_job}};
  j["nodes"] = nlohmann::json::array();
  for (const TcgNode& n : graph.nodes) {
    nlohmann::json jn{{"id", n.id}, {"kind", node_kind_name(n.kind)}};
    if (n.circuit) jn["circuit"] = qpu::circuit_to_json(*n.circuit);
    if (n.twirl) {
      jn["twirl"] = {{"base", qpu::circuit_to_json(n.twirl->base)},
                     {"count", n.twirl->count},
                     {"amplitude", n.twirl->amplitude}};
    }
    if (n.classical) {
      jn["classical"] = {{"function", n.classical->function},
                         {"cost",
                          {{"base", format_duration(n.classical->cost.base)},
                           {"per_byte_ns", n.classical->cost.per_byte_ns}}}};
    }
    if (n.placement_hint) jn["placement_hint"] = tier_name(*n.placement_hint);
    j["nodes"].push_back(std::move(jn));
  }
  j["edges"] = nlohmann::json::array();
  for (const TensorEdge& e : graph.edges) {
    j["edges"].push_back({{"from", {{"node", e.from.node}, {"port", e.from.port}}},
                          {"to", {{"node", e.to.node}, {"port", e.to.port}}},
                          {"kind", tensor_kind_name(e.kind)},
                          {"bytes", e.bytes}});
  }
  return j;
}

TensorComputeGraph graph_from_json(const nlohmann::json& j) {
  TensorComputeGraph g;
  g.name = j.value("name", std::string{});
  g.owner_job = j.value("owner_job", std::string{});
  for (const auto& jn : j.value("nodes", nlohmann::json::array())) {
    TcgNode n;
    n.id = jn.at("id").get<std::string>();
    n.kind = tcg_node_kind_from_string(jn.at("kind").get<std::string>());
    if (jn.contains("circuit")) {
      n.circuit = qpu::circuit_from_json(jn.at("circuit"));
    }
    if (jn.contains("twirl")) {
      TwirlSpec t;
      t.base = qpu::circuit_from_json(jn.at("twirl").at("base"));
      t.count = jn.at("twirl").value("count", 0);
      t.amplitude = jn.at("twirl").value("amplitude", 0.0);
      n.twirl = std::move(t);
    }
    if (jn.contains("classical")) {
      ClassicalOpSpec c;
      c.function = jn.at("classical").at("function").get<std::string>();
      if (jn.at("classical").contains("cost")) {
        const auto& jc = jn.at("classical").at("cost");
        if (jc.contains("base")) {
          const auto& b = jc.at("base");
          c.cost.base = b.is_string() ? parse_duration(b.get<std::string>())
                                      : Duration(b.get<std::int64_t>());
        }
        c.cost.per_byte_ns = jc.value("per_byte_ns", 0.0);
      }
      n.classical = std::move(c);
    }
    if (jn.contains("placement_hint")) {
      n.placement_hint =
          tier_from_string(jn.at("placement_hint").get<std::string>());
    }
    g.nodes.push_back(std::move(n));
  }
  for (const auto& je : j.value("edges", nlohmann::json::array())) {
    TensorEdge e;
    e.from.node = je.at("from").at("node").get<std::string>();
    e.from.port = je.at("from").value("port", 0);
    e.to.node = je.at("to").at("node").get<std::string>();
    e.to.port = je.at("to").value("port", 0);
    e.kind = tensor_kind_from_string(je.at("kind").get<std::string>());
    e.bytes = je.value("bytes", std::uint64_t{0});
    g.edges.push_back(std::move(e));
  }
  return g;
}

}  // namespace qcsc::tcg
