#pragma once

#include <map>
#include <string>

#include "qcsc/model/coupling.hpp"
#include "qcsc/tcg/graph.hpp"

namespace qcsc::tcg {

using PlacementMap = std::map<std::string, std::string>;  // node id -> resource

// Per-edge minimum coupling; edges not present default to (BatchTime, Loose).
using EdgeRequirements = std::map<std::string, CouplingClass>;

std::string edge_key(const TensorEdge& edge);

// Assigns every node a resource: QuantumCircuit nodes to a QPU, classical
// nodes by hint tier (ClassicalOp defaults to ScaleOut, falling back across
// tiers when a hint tier has no nodes), such that every edge's endpoints
// satisfy its coupling requirement. Greedy in topological order with
// deterministic resource ordering; throws PlacementInfeasible naming the
// violating edge. The graph must be valid.
PlacementMap plan_placement(const TensorComputeGraph& graph,
                            const Topology& topology,
                            const CouplingThresholds& thresholds,
                            const EdgeRequirements& requirements = {});

// Re-checks every edge of a computed placement (soundness sweep).
void verify_placement(const TensorComputeGraph& graph, const Topology& topology,
                      const CouplingThresholds& thresholds,
                      const EdgeRequirements& requirements,
                      const PlacementMap& placement);

}  // namespace qcsc::tcg
