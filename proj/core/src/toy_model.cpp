#include "qcsc/qpu/toy_model.hpp"

#include "qcsc/math.hpp"

namespace qcsc::qpu {

void validate_model(const ToyModel& model) {
  if (model.sites <= 0) {
    raise(ErrorCode::InvalidSpec, "model must have sites > 0");
  }
  if (model.sites > kMaxModelSites) {
    raise(ErrorCode::ModelTooLarge,
          std::to_string(model.sites) + " sites exceeds the " +
              std::to_string(kMaxModelSites) + "-site desk-scale cap");
  }
  if (model.magnetization_k < 0 || model.magnetization_k > model.sites) {
    raise(ErrorCode::InvalidSpec, "magnetization sector k out of [0, sites]");
  }
}

std::vector<Bitstring> sector_basis(int sites, int k) {
  std::vector<Bitstring> basis;
  basis.reserve(math::binomial(static_cast<unsigned>(sites),
                               static_cast<unsigned>(k)));
  if (k == 0) {
    basis.push_back(0);
    return basis;
  }
  const Bitstring limit = Bitstring{1} << sites;
  Bitstring x = (Bitstring{1} << k) - 1;  // lowest weight-k mask
  while (x < limit) {
    basis.push_back(x);
    // Gosper's hack: next mask with the same popcount.
    const Bitstring c = x & (~x + 1);
    const Bitstring r = x + c;
    x = (((r ^ x) >> 2) / c) | r;
    if (c == 0) break;
  }
  return basis;
}

double diagonal_element(const ToyModel& model, Bitstring x) {
  double value = 0.0;
  for (int i = 0; i + 1 < model.sites; ++i) {
    const double si = ((x >> i) & 1u) ? 0.5 : -0.5;
    const double sj = ((x >> (i + 1)) & 1u) ? 0.5 : -0.5;
    value += model.delta * si * sj;
  }
  return value;
}

Bitstring mean_field_state(const ToyModel& model) {
  const std::vector<Bitstring> basis =
      sector_basis(model.sites, model.magnetization_k);
  Bitstring best = basis.front();
  double best_value = diagonal_element(model, best);
  for (const Bitstring x : basis) {
    const double v = diagonal_element(model, x);
    if (v < best_value) {
      best_value = v;
      best = x;
    }
  }
  return best;
}

nlohmann::json model_to_json(const ToyModel& model) {
  return {{"kind", "XXZChain"},
          {"sites", model.sites},
          {"delta", model.delta},
          {"k", model.magnetization_k}};
}

ToyModel model_from_json(const nlohmann::json& j) {
  ToyModel m;
  const std::string kind = j.value("kind", "XXZChain");
  if (kind != "XXZChain") {
    raise(ErrorCode::ParseError, "unknown toy model kind '" + kind + "'");
  }
  m.kind = ToyModelKind::XXZChain;
  m.sites = j.at("sites").get<int>();
  m.delta = j.value("delta", 1.0);
  m.magnetization_k = j.at("k").get<int>();
  return m;
}

}  // namespace qcsc::qpu
