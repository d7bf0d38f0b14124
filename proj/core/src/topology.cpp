#include "qcsc/model/topology.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace qcsc {

const char* node_kind_name(NodeKind kind) {
  switch (kind) {
    case NodeKind::Qpu: return "QPU";
    case NodeKind::ScaleUpNode: return "ScaleUpNode";
    case NodeKind::ScaleOutNode: return "ScaleOutNode";
  }
  return "?";
}

NodeKind node_kind_from_string(const std::string& name) {
  if (name == "QPU") return NodeKind::Qpu;
  if (name == "ScaleUpNode") return NodeKind::ScaleUpNode;
  if (name == "ScaleOutNode") return NodeKind::ScaleOutNode;
  raise(ErrorCode::ParseError, "unknown node kind '" + name + "'");
}

Topology Topology::build(std::vector<ResourceNode> nodes, std::vector<Link> links) {
  Topology t;
  t.nodes_ = std::move(nodes);
  t.links_ = std::move(links);

  for (std::size_t i = 0; i < t.nodes_.size(); ++i) {
    const ResourceNode& n = t.nodes_[i];
    if (!t.index_.emplace(n.id, i).second) {
      raise(ErrorCode::DuplicateId, "node id '" + n.id + "' appears twice");
    }
    if (n.kind == NodeKind::Qpu) {
      if (n.qpu_qubits <= 0) {
        raise(ErrorCode::InvalidSpec, "QPU '" + n.id + "' must have qubits > 0");
      }
    } else {
      if (n.qpu_qubits != 0) {
        raise(ErrorCode::InvalidSpec,
              "non-QPU '" + n.id + "' must have qpu_qubits = 0");
      }
      if (n.cpu_cores + n.gpu_units <= 0) {
        raise(ErrorCode::InvalidSpec,
              "classical node '" + n.id + "' must have cores or gpus");
      }
    }
  }

  for (const Link& l : t.links_) {
    if (!t.index_.count(l.a) || !t.index_.count(l.b)) {
      raise(ErrorCode::DanglingLink,
            "link " + l.a + "<->" + l.b + " references an unknown node");
    }
    if (l.a == l.b) {
      raise(ErrorCode::DanglingLink, "link endpoints must be distinct: " + l.a);
    }
    if (l.latency <= Duration{0}) {
      raise(ErrorCode::InvalidSpec, "link " + l.a + "<->" + l.b + " latency <= 0");
    }
    if (l.bandwidth_bps == 0) {
      raise(ErrorCode::InvalidSpec, "link " + l.a + "<->" + l.b + " bandwidth = 0");
    }
  }

  const std::size_t n = t.nodes_.size();
  std::vector<std::vector<std::pair<std::size_t, const Link*>>> adj(n);
  for (const Link& l : t.links_) {
    const std::size_t ia = t.index_.at(l.a);
    const std::size_t ib = t.index_.at(l.b);
    adj[ia].emplace_back(ib, &l);
    adj[ib].emplace_back(ia, &l);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (t.nodes_[i].kind == NodeKind::Qpu && adj[i].empty()) {
      raise(ErrorCode::IsolatedQpu,
            "QPU '" + t.nodes_[i].id + "' has no links to any classical tier");
    }
  }

  // All-pairs min-latency via Dijkstra from every source; ties broken by
  // lower node index so the chosen path (and its bottleneck) is deterministic.
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max();
  t.latency_ns_.assign(n * n, -1);
  t.bottleneck_bps_.assign(n * n, 0);
  for (std::size_t src = 0; src < n; ++src) {
    std::vector<std::int64_t> dist(n, kInf);
    std::vector<std::uint64_t> bottleneck(n, 0);
    std::vector<bool> done(n, false);
    dist[src] = 0;
    bottleneck[src] = std::numeric_limits<std::uint64_t>::max();
    using Item = std::pair<std::int64_t, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    heap.emplace(0, src);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = true;
      for (const auto& [v, link] : adj[u]) {
        const std::int64_t nd = d + link->latency.count();
        const std::uint64_t nb = std::min(bottleneck[u], link->bandwidth_bps);
        if (nd < dist[v] || (nd == dist[v] && nb > bottleneck[v] && !done[v])) {
          dist[v] = nd;
          bottleneck[v] = nb;
          heap.emplace(nd, v);
        }
      }
    }
    for (std::size_t dst = 0; dst < n; ++dst) {
      if (dist[dst] == kInf) continue;
      t.latency_ns_[src * n + dst] = dist[dst];
      t.bottleneck_bps_[src * n + dst] = bottleneck[dst];
    }
  }
  return t;
}

std::size_t Topology::index(const std::string& id) const {
  const auto it = index_.find(id);
  if (it == index_.end()) {
    raise(ErrorCode::UnknownResource, "no node '" + id + "' in topology");
  }
  return it->second;
}

bool Topology::has_node(const std::string& id) const {
  return index_.count(id) > 0;
}

const ResourceNode& Topology::node(const std::string& id) const {
  return nodes_[index(id)];
}

bool Topology::connected(const std::string& a, const std::string& b) const {
  return latency_ns_[index(a) * nodes_.size() + index(b)] >= 0;
}

Duration Topology::path_latency(const std::string& a, const std::string& b) const {
  const std::int64_t ns = latency_ns_[index(a) * nodes_.size() + index(b)];
  if (ns < 0) raise(ErrorCode::NoPath, "no path " + a + " -> " + b);
  return Duration(ns);
}

std::uint64_t Topology::bottleneck_bandwidth(const std::string& a,
                                             const std::string& b) const {
  const std::uint64_t bw = bottleneck_bps_[index(a) * nodes_.size() + index(b)];
  if (bw == 0) raise(ErrorCode::NoPath, "no path " + a + " -> " + b);
  return bw;
}

std::vector<std::string> Topology::qpu_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, i] : index_) {
    if (nodes_[i].kind == NodeKind::Qpu) out.push_back(id);
  }
  return out;
}

std::vector<std::string> Topology::classical_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, i] : index_) {
    if (nodes_[i].kind != NodeKind::Qpu) out.push_back(id);
  }
  return out;
}

namespace {

Duration duration_field(const nlohmann::json& j, const char* key,
                        Duration fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return parse_duration(v.get<std::string>());
  return Duration(v.get<std::int64_t>());
}

}  // namespace

Topology build_topology(const nlohmann::json& config) {
  if (!config.is_object() || !config.contains("nodes")) {
    raise(ErrorCode::ParseError, "topology fragment needs a 'nodes' array");
  }
  std::vector<ResourceNode> nodes;
  for (const auto& jn : config.at("nodes")) {
    ResourceNode n;
    n.id = jn.at("id").get<std::string>();
    n.kind = node_kind_from_string(jn.at("kind").get<std::string>());
    n.cpu_cores = jn.value("cpu_cores", 0);
    n.gpu_units = jn.value("gpu_units", 0);
    n.qpu_qubits = jn.value("qpu_qubits", 0);
    n.residency_zone = jn.value("residency_zone", std::string{});
    n.service_overhead = duration_field(jn, "service_overhead", Duration{0});
    nodes.push_back(std::move(n));
  }
  std::vector<Link> links;
  for (const auto& jl : config.value("links", nlohmann::json::array())) {
    Link l;
    l.a = jl.at("a").get<std::string>();
    l.b = jl.at("b").get<std::string>();
    l.latency = duration_field(jl, "latency", Duration{0});
    l.bandwidth_bps = jl.value("bandwidth_bps", std::uint64_t{0});
    links.push_back(std::move(l));
  }
  return Topology::build(std::move(nodes), std::move(links));
}

nlohmann::json topology_to_json(const Topology& topology) {
  nlohmann::json out;
  out["nodes"] = nlohmann::json::array();
  for (const ResourceNode& n : topology.nodes()) {
    out["nodes"].push_back({{"id", n.id},
                            {"kind", node_kind_name(n.kind)},
                            {"cpu_cores", n.cpu_cores},
                            {"gpu_units", n.gpu_units},
                            {"qpu_qubits", n.qpu_qubits},
                            {"residency_zone", n.residency_zone},
                            {"service_overhead", format_duration(n.service_overhead)}});
  }
  out["links"] = nlohmann::json::array();
  for (const Link& l : topology.links()) {
    out["links"].push_back({{"a", l.a},
                            {"b", l.b},
                            {"latency", format_duration(l.latency)},
                            {"bandwidth_bps", l.bandwidth_bps}});
  }
  return out;
}

}  // namespace qcsc
