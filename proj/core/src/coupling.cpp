#include "qcsc/model/coupling.hpp"

namespace qcsc {

const char* temporal_name(TemporalCoupling t) {
  switch (t) {
    case TemporalCoupling::RealTime: return "RealTime";
    case TemporalCoupling::NearTime: return "NearTime";
    case TemporalCoupling::BatchTime: return "BatchTime";
  }
  return "?";
}

const char* spatial_name(SpatialCoupling s) {
  return s == SpatialCoupling::Tight ? "Tight" : "Loose";
}

TemporalCoupling temporal_from_string(const std::string& name) {
  if (name == "RealTime") return TemporalCoupling::RealTime;
  if (name == "NearTime") return TemporalCoupling::NearTime;
  if (name == "BatchTime") return TemporalCoupling::BatchTime;
  raise(ErrorCode::ParseError, "unknown temporal coupling '" + name + "'");
}

SpatialCoupling spatial_from_string(const std::string& name) {
  if (name == "Tight") return SpatialCoupling::Tight;
  if (name == "Loose") return SpatialCoupling::Loose;
  raise(ErrorCode::ParseError, "unknown spatial coupling '" + name + "'");
}

CouplingClass classify_coupling(const Topology& topology, const std::string& a,
                                const std::string& b,
                                const CouplingThresholds& thresholds) {
  const Duration latency = topology.path_latency(a, b);
  CouplingClass out;
  if (latency < thresholds.real_time_max) {
    out.temporal = TemporalCoupling::RealTime;
  } else if (latency < thresholds.near_time_max) {
    out.temporal = TemporalCoupling::NearTime;
  } else {
    out.temporal = TemporalCoupling::BatchTime;
  }
  const bool same_zone =
      topology.node(a).residency_zone == topology.node(b).residency_zone;
  out.spatial = (same_zone && latency < thresholds.tight_max)
                    ? SpatialCoupling::Tight
                    : SpatialCoupling::Loose;
  return out;
}

bool temporal_satisfies(TemporalCoupling actual, TemporalCoupling required) {
  return static_cast<int>(actual) <= static_cast<int>(required);
}

bool spatial_satisfies(SpatialCoupling actual, SpatialCoupling required) {
  return static_cast<int>(actual) <= static_cast<int>(required);
}

bool coupling_satisfies(CouplingClass actual, CouplingClass required) {
  return temporal_satisfies(actual.temporal, required.temporal) &&
         spatial_satisfies(actual.spatial, required.spatial);
}

}  // namespace qcsc
