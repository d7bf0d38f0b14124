#include "qcsc/tcg/placement.hpp"

#include <algorithm>

namespace qcsc::tcg {

std::string edge_key(const TensorEdge& edge) {
  return edge.from.node + ":" + std::to_string(edge.from.port) + "->" +
         edge.to.node + ":" + std::to_string(edge.to.port);
}

namespace {

CouplingClass requirement_for(const EdgeRequirements& requirements,
                              const TensorEdge& edge) {
  const auto it = requirements.find(edge_key(edge));
  if (it != requirements.end()) return it->second;
  return CouplingClass{TemporalCoupling::BatchTime, SpatialCoupling::Loose};
}

bool edge_ok(const Topology& topology, const CouplingThresholds& thresholds,
             const std::string& a, const std::string& b,
             CouplingClass required) {
  if (a == b) return true;  // co-placed nodes trivially satisfy any coupling
  if (!topology.connected(a, b)) return false;
  return coupling_satisfies(classify_coupling(topology, a, b, thresholds),
                            required);
}

std::vector<std::string> resources_for_tier(const Topology& topology,
                                            Tier tier) {
  NodeKind want = NodeKind::ScaleOutNode;
  switch (tier) {
    case Tier::QPU: want = NodeKind::Qpu; break;
    case Tier::ScaleUp: want = NodeKind::ScaleUpNode; break;
    case Tier::ScaleOut: want = NodeKind::ScaleOutNode; break;
  }
  std::vector<std::string> out;
  for (const ResourceNode& n : topology.nodes()) {
    if (n.kind == want) out.push_back(n.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PlacementMap plan_placement(const TensorComputeGraph& graph,
                            const Topology& topology,
                            const CouplingThresholds& thresholds,
                            const EdgeRequirements& requirements) {
  PlacementMap placement;
  const std::vector<std::string> order = topological_order(graph);

  for (const std::string& id : order) {
    const TcgNode& node = *graph.find_node(id);

    std::vector<std::string> candidates;
    if (node.kind == TcgNodeKind::QuantumCircuit) {
      candidates = resources_for_tier(topology, Tier::QPU);
      if (node.circuit) {
        std::erase_if(candidates, [&](const std::string& r) {
          return topology.node(r).qpu_qubits < node.circuit->num_qubits;
        });
      }
    } else {
      const Tier hint = node.placement_hint.value_or(Tier::ScaleOut);
      candidates = resources_for_tier(topology, hint);
      if (candidates.empty()) {
        // Fall back to the other classical tier.
        candidates = resources_for_tier(
            topology, hint == Tier::ScaleOut ? Tier::ScaleUp : Tier::ScaleOut);
      }
    }

    const TensorEdge* blocking = nullptr;
    std::string chosen;
    for (const std::string& resource : candidates) {
      bool ok = true;
      for (const TensorEdge& e : graph.edges) {
        const bool incoming = e.to.node == id && placement.count(e.from.node);
        const bool outgoing = e.from.node == id && placement.count(e.to.node);
        if (!incoming && !outgoing) continue;
        const std::string& other =
            incoming ? placement.at(e.from.node) : placement.at(e.to.node);
        if (!edge_ok(topology, thresholds, resource, other,
                     requirement_for(requirements, e))) {
          ok = false;
          blocking = &e;
          break;
        }
      }
      if (ok) {
        chosen = resource;
        break;
      }
    }
    if (chosen.empty()) {
      if (blocking != nullptr) {
        raise(ErrorCode::PlacementInfeasible,
              "no resource for node '" + id + "' satisfies edge " +
                  edge_key(*blocking));
      }
      raise(ErrorCode::PlacementInfeasible,
            "no resource available for node '" + id + "'");
    }
    placement[id] = chosen;
  }

  verify_placement(graph, topology, thresholds, requirements, placement);
  return placement;
}

void verify_placement(const TensorComputeGraph& graph, const Topology& topology,
                      const CouplingThresholds& thresholds,
                      const EdgeRequirements& requirements,
                      const PlacementMap& placement) {
  for (const TensorEdge& e : graph.edges) {
    const std::string& a = placement.at(e.from.node);
    const std::string& b = placement.at(e.to.node);
    if (!edge_ok(topology, thresholds, a, b, requirement_for(requirements, e))) {
      raise(ErrorCode::PlacementInfeasible,
            "edge " + edge_key(e) + " placed on " + a + " -> " + b +
                " violates its coupling requirement");
    }
  }
}

}  // namespace qcsc::tcg
