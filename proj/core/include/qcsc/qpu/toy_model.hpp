#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsc/bitstring.hpp"

namespace qcsc::qpu {

inline constexpr int kMaxModelSites = 24;

enum class ToyModelKind { XXZChain };

// Open-boundary spin-1/2 XXZ chain,
//   H = sum_i [ (S+_i S-_{i+1} + S-_i S+_{i+1}) / 2 + delta S^z_i S^z_{i+1} ],
// with site i occupied (bit 1) meaning spin up, S^z = +-1/2. Total
// magnetization is conserved, so every eigenstate lives in a fixed
// Hamming-weight sector k; k plays the role of a particle number.
struct ToyModel {
  ToyModelKind kind = ToyModelKind::XXZChain;
  int sites = 0;
  double delta = 1.0;
  int magnetization_k = 0;

  bool operator==(const ToyModel&) const = default;
};

// Errors: ModelTooLarge (> kMaxModelSites), InvalidSpec (bad k).
void validate_model(const ToyModel& model);

// All width-`sites` bitstrings of weight k, ascending by mask value.
std::vector<Bitstring> sector_basis(int sites, int k);

double diagonal_element(const ToyModel& model, Bitstring x);

// Calls f(neighbor, amplitude) for every off-diagonal |y> with <y|H|x> != 0:
// one entry of amplitude 1/2 per bond whose two bits differ.
template <typename F>
void for_each_offdiagonal(const ToyModel& model, Bitstring x, F&& f) {
  for (int i = 0; i + 1 < model.sites; ++i) {
    const Bitstring pair = (Bitstring{1} << i) | (Bitstring{1} << (i + 1));
    const Bitstring masked = x & pair;
    if (masked != 0 && masked != pair) {
      f(x ^ pair, 0.5);
    }
  }
}

// Lowest-diagonal single configuration in sector k (ties -> lowest mask);
// the mean-field reference of the parameterized sampler.
Bitstring mean_field_state(const ToyModel& model);

nlohmann::json model_to_json(const ToyModel& model);
ToyModel model_from_json(const nlohmann::json& j);

}  // namespace qcsc::qpu
