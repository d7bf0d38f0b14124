#pragma once

#include <string>

#include "qcsc/model/topology.hpp"
#include "qcsc/time.hpp"

namespace qcsc {

enum class TemporalCoupling { RealTime, NearTime, BatchTime };
enum class SpatialCoupling { Tight, Loose };

struct CouplingClass {
  TemporalCoupling temporal = TemporalCoupling::BatchTime;
  SpatialCoupling spatial = SpatialCoupling::Loose;

  bool operator==(const CouplingClass&) const = default;
};

const char* temporal_name(TemporalCoupling t);
const char* spatial_name(SpatialCoupling s);
TemporalCoupling temporal_from_string(const std::string& name);
SpatialCoupling spatial_from_string(const std::string& name);

// Latency bands are scenario-configurable; defaults follow the real-time /
// near-time / batch-time prose bands, with tightness additionally requiring
// sub-millisecond reach.
struct CouplingThresholds {
  Duration real_time_max{std::chrono::microseconds(10)};
  Duration near_time_max{std::chrono::seconds(1)};
  Duration tight_max{std::chrono::milliseconds(1)};
};

// Classification from the min-latency path between a and b:
//   temporal: latency < real_time_max -> RealTime; < near_time_max ->
//   NearTime; else BatchTime.
//   spatial: Tight iff same residency_zone and latency < tight_max.
// Throws NoPath when a and b are disconnected.
CouplingClass classify_coupling(const Topology& topology, const std::string& a,
                                const std::string& b,
                                const CouplingThresholds& thresholds = {});

// True when `actual` is at least as strict as `required` (a RealTime link
// satisfies a NearTime requirement; Tight satisfies Loose).
bool temporal_satisfies(TemporalCoupling actual, TemporalCoupling required);
bool spatial_satisfies(SpatialCoupling actual, SpatialCoupling required);
bool coupling_satisfies(CouplingClass actual, CouplingClass required);

}  // namespace qcsc
