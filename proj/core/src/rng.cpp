#include "qcsc/sim/rng.hpp"

#include <algorithm>
#include <cmath>

#include "qcsc/errors.hpp"

namespace qcsc::sim {

namespace {

std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::string_view stream_id)
    : seed_(seed),
      stream_id_(stream_id),
      engine_(splitmix64(seed ^ fnv1a64(stream_id))) {}

RngStream RngStream::child(std::string_view suffix) const {
  return RngStream(seed_, stream_id_ + "/" + std::string(suffix));
}

std::uint64_t RngStream::next_u64() { return engine_(); }

double RngStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t RngStream::uniform_int(std::uint64_t bound) {
  if (bound == 0) raise(ErrorCode::InvalidSpec, "uniform_int bound must be > 0");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t draw;
  do {
    draw = next_u64();
  } while (draw >= limit);
  return draw % bound;
}

bool RngStream::bernoulli(double p) {
  if (p <= 0.0) {
    if (p < 0.0) raise(ErrorCode::InvalidSpec, "bernoulli p < 0");
    return false;
  }
  if (p >= 1.0) return true;
  return next_double() < p;
}

std::size_t RngStream::categorical(std::span<const double> weights) {
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      raise(ErrorCode::InvalidSpec, "categorical weight must be finite and >= 0");
    }
    total += w;
  }
  if (total <= 0.0) raise(ErrorCode::InvalidSpec, "categorical weights sum to 0");
  const double u = next_double() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
  cumulative_.reserve(weights.size());
  double total = 0.0;
  for (const double w : weights) {
    if (w < 0.0 || !std::isfinite(w)) {
      raise(ErrorCode::InvalidSpec, "categorical weight must be finite and >= 0");
    }
    total += w;
    cumulative_.push_back(total);
  }
  if (cumulative_.empty() || total <= 0.0) {
    raise(ErrorCode::InvalidSpec, "categorical weights sum to 0");
  }
  for (double& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

std::size_t CategoricalSampler::sample(RngStream& rng) const {
  const double u = rng.next_double();
  const auto it =
      std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
}

}  // namespace qcsc::sim
