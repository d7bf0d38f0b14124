#include "qcsc/sim/kernel.hpp"

#include <cassert>
#include <utility>

namespace qcsc::sim {

SimKernel::SimKernel(const Topology* topology) : topology_(topology) {}

const Topology& SimKernel::topology() const {
  if (topology_ == nullptr) {
    raise(ErrorCode::RuntimeFailure, "kernel has no topology attached");
  }
  return *topology_;
}

std::uint64_t SimKernel::post(VTime t, std::string target,
                              std::string payload_kind,
                              std::function<void()> fn) {
  if (t < now_) {
    raise(ErrorCode::TimestampInPast,
          "post at t=" + std::to_string(t.count()) +
              "ns before now=" + std::to_string(now_.count()) + "ns (target " +
              target + ")");
  }
  const std::uint64_t seq = next_seq_++;
  queue_.push(std::make_unique<Event>(Event{
      t, seq, std::move(target), std::move(payload_kind), std::move(fn)}));
  return seq;
}

std::uint64_t SimKernel::post_after(Duration delay, std::string target,
                                    std::string payload_kind,
                                    std::function<void()> fn) {
  return post(now_ + delay, std::move(target), std::move(payload_kind),
              std::move(fn));
}

void SimKernel::dispatch(Event& ev) {
  assert(ev.t >= now_ && "processed-event timestamps must be non-decreasing");
  now_ = ev.t;
  ++processed_;
  if (trace_ != nullptr) {
    (*trace_) << ev.t.count() << ' ' << ev.seq << ' ' << ev.target << ' '
              << ev.payload_kind << '\n';
  }
  try {
    ev.fn();
  } catch (const Error& e) {
    throw Error(ErrorCode::HandlerFailure,
                "handler '" + ev.target + "' (" + ev.payload_kind + ") at t=" +
                    std::to_string(ev.t.count()) + "ns: " + e.what());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::HandlerFailure,
                "handler '" + ev.target + "' (" + ev.payload_kind + ") at t=" +
                    std::to_string(ev.t.count()) + "ns: " + e.what());
  }
  for (const auto& hook : hooks_) hook();
}

RunStats SimKernel::run_until(VTime t_end) {
  const std::uint64_t before = processed_;
  while (!queue_.empty() && queue_.top()->t <= t_end) {
    std::unique_ptr<Event> ev =
        std::move(const_cast<std::unique_ptr<Event>&>(queue_.top()));
    queue_.pop();
    dispatch(*ev);
  }
  if (t_end > now_) now_ = t_end;
  return RunStats{processed_ - before, now_};
}

RunStats SimKernel::run_all() {
  const std::uint64_t before = processed_;
  while (!queue_.empty()) {
    std::unique_ptr<Event> ev =
        std::move(const_cast<std::unique_ptr<Event>&>(queue_.top()));
    queue_.pop();
    dispatch(*ev);
  }
  return RunStats{processed_ - before, now_};
}

Duration SimKernel::transfer_time(const std::string& src,
                                  const std::string& dst,
                                  std::uint64_t size_bytes) const {
  const Topology& topo = topology();
  const Duration latency = topo.path_latency(src, dst);
  if (size_bytes == 0) return latency;
  const std::uint64_t bw = topo.bottleneck_bandwidth(src, dst);
  const unsigned __int128 num =
      static_cast<unsigned __int128>(size_bytes) * 1'000'000'000u;
  const std::uint64_t serialization_ns =
      static_cast<std::uint64_t>((num + bw - 1) / bw);
  return latency + Duration(static_cast<std::int64_t>(serialization_ns));
}

std::uint64_t SimKernel::transfer(const std::string& src,
                                  const std::string& dst,
                                  std::uint64_t size_bytes,
                                  std::string payload_kind,
                                  std::function<void()> on_delivery) {
  return post(now_ + transfer_time(src, dst, size_bytes), dst,
              std::move(payload_kind), std::move(on_delivery));
}

void SimKernel::add_post_event_hook(std::function<void()> hook) {
  hooks_.push_back(std::move(hook));
}

}  // namespace qcsc::sim
