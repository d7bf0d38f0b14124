#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "qcsc/errors.hpp"
#include "qcsc/model/topology.hpp"
#include "qcsc/time.hpp"

namespace qcsc::sim {

struct RunStats {
  std::uint64_t events_processed = 0;
  VTime final_time{0};
};

// Deterministic single-threaded discrete-event engine. Events are totally
// ordered by (timestamp, sequence); sequence is assigned at post time, so
// same-timestamp events fire in post order. The kernel object may be moved
// between threads but never accessed concurrently; handlers must keep their
// mutable state in kernel-managed stores.
class SimKernel {
 public:
  explicit SimKernel(const Topology* topology = nullptr);

  VTime now() const { return now_; }
  const Topology& topology() const;

  // Schedules fn at virtual time t. Throws TimestampInPast when t < now().
  // `target` and `payload_kind` only label the event for the trace.
  std::uint64_t post(VTime t, std::string target, std::string payload_kind,
                     std::function<void()> fn);
  std::uint64_t post_after(Duration delay, std::string target,
                           std::string payload_kind, std::function<void()> fn);

  // Processes every event with timestamp <= t_end, then advances the clock
  // to t_end. Handler exceptions surface as HandlerFailure naming the
  // target and event.
  RunStats run_until(VTime t_end);
  // Drains the queue completely; the clock stays at the last event.
  RunStats run_all();

  bool has_pending() const { return !queue_.empty(); }
  std::size_t pending_events() const { return queue_.size(); }

  // Message-transfer model over the topology: delivery after the min-latency
  // path's total latency plus ceil(size / bottleneck bandwidth). Size 0 is a
  // latency-only control message. Throws NoPath.
  Duration transfer_time(const std::string& src, const std::string& dst,
                         std::uint64_t size_bytes) const;
  std::uint64_t transfer(const std::string& src, const std::string& dst,
                         std::uint64_t size_bytes, std::string payload_kind,
                         std::function<void()> on_delivery);

  // Hook invoked after every processed event (invariant checks).
  void add_post_event_hook(std::function<void()> hook);

  // One line per processed event: "timestamp_ns sequence target payload-kind".
  void set_trace_sink(std::ostream* sink) { trace_ = sink; }

 private:
  struct Event {
    VTime t;
    std::uint64_t seq;
    std::string target;
    std::string payload_kind;
    std::function<void()> fn;
  };
  struct Later {
    bool operator()(const std::unique_ptr<Event>& a,
                    const std::unique_ptr<Event>& b) const {
      if (a->t != b->t) return a->t > b->t;
      return a->seq > b->seq;
    }
  };

  void dispatch(Event& ev);

  const Topology* topology_;
  VTime now_{0};
  std::uint64_t next_seq_ = 0;
  std::uint64_t processed_ = 0;
  std::priority_queue<std::unique_ptr<Event>,
                      std::vector<std::unique_ptr<Event>>, Later>
      queue_;
  std::vector<std::function<void()>> hooks_;
  std::ostream* trace_ = nullptr;
};

}  // namespace qcsc::sim
