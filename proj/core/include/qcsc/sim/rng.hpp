#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcsc::sim {

// Deterministic named random stream. The same (seed, stream id) pair always
// yields the same draw sequence, and distinct stream ids are decorrelated, so
// adding draws to one workload never perturbs another.
//
// Distributions are implemented here instead of <random> adaptors because the
// standard leaves uniform_int/real distribution algorithms unspecified; the
// mt19937_64 engine itself is pinned by the standard.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view stream_id);

  std::uint64_t seed() const { return seed_; }
  const std::string& stream_id() const { return stream_id_; }

  // Child stream derived by path extension: "<id>/<suffix>".
  RngStream child(std::string_view suffix) const;

  std::uint64_t next_u64();
  // Uniform on [0, 1), 53-bit resolution.
  double next_double();
  // Uniform on [0, bound); bound > 0. Unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t bound);
  bool bernoulli(double p);
  // Index drawn with probability weights[i] / sum(weights); weights >= 0 with
  // a positive sum.
  std::size_t categorical(std::span<const double> weights);

 private:
  std::uint64_t seed_;
  std::string stream_id_;
  std::mt19937_64 engine_;
};

// Precomputed cumulative table for repeated categorical draws over a fixed
// weight vector (the sampler's |<x|psi>|^2 table).
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> weights);
  std::size_t sample(RngStream& rng) const;
  std::size_t size() const { return cumulative_.size(); }

 private:
  std::vector<double> cumulative_;  // normalized, last entry == 1.0
};

}  // namespace qcsc::sim
