#include "qcsc/qpu/circuit.hpp"

namespace qcsc::qpu {

const char* circuit_kind_name(CircuitKind kind) {
  switch (kind) {
    case CircuitKind::GroundStateSampler: return "GroundStateSampler";
    case CircuitKind::ParameterizedSampler: return "ParameterizedSampler";
    case CircuitKind::SyndromeEmitter: return "SyndromeEmitter";
  }
  return "?";
}

CircuitKind circuit_kind_from_string(const std::string& name) {
  if (name == "GroundStateSampler") return CircuitKind::GroundStateSampler;
  if (name == "ParameterizedSampler") return CircuitKind::ParameterizedSampler;
  if (name == "SyndromeEmitter") return CircuitKind::SyndromeEmitter;
  raise(ErrorCode::ParseError, "unknown circuit kind '" + name + "'");
}

void validate_circuit(const CircuitSpec& circuit) {
  if (circuit.kind == CircuitKind::SyndromeEmitter) {
    if (!circuit.syndromes.has_value()) {
      raise(ErrorCode::InvalidCircuit, "SyndromeEmitter needs a syndrome spec");
    }
    const SyndromeSpec& s = *circuit.syndromes;
    if (s.distance < 3 || s.distance % 2 == 0) {
      raise(ErrorCode::InvalidDistance,
            "code distance must be odd and >= 3, got " +
                std::to_string(s.distance));
    }
    if (s.physical_error < 0.0 || s.physical_error >= 0.5) {
      raise(ErrorCode::InvalidCircuit, "physical error must be in [0, 0.5)");
    }
    if (s.rounds <= 0 || s.period <= Duration{0}) {
      raise(ErrorCode::InvalidCircuit, "syndrome rounds and period must be > 0");
    }
    return;
  }
  if (circuit.shots <= 0) {
    raise(ErrorCode::InvalidCircuit, "shots must be > 0");
  }
  validate_model(circuit.model);
  if (circuit.num_qubits != circuit.model.sites) {
    raise(ErrorCode::InvalidCircuit,
          "num_qubits must match the toy model size");
  }
  if (circuit.two_qubit_gate_count < 0) {
    raise(ErrorCode::InvalidCircuit, "negative gate count");
  }
  const bool parameterized = circuit.kind == CircuitKind::ParameterizedSampler;
  if (parameterized && circuit.theta.empty()) {
    raise(ErrorCode::InvalidTheta, "ParameterizedSampler needs theta");
  }
  if (!parameterized && !circuit.theta.empty()) {
    raise(ErrorCode::InvalidTheta,
          "theta is only valid for ParameterizedSampler");
  }
}

nlohmann::json circuit_to_json(const CircuitSpec& c) {
  nlohmann::json j{{"id", c.id},
                   {"num_qubits", c.num_qubits},
                   {"two_qubit_gate_count", c.two_qubit_gate_count},
                   {"kind", circuit_kind_name(c.kind)},
                   {"model", model_to_json(c.model)},
                   {"shots", c.shots}};
  if (!c.theta.empty()) j["theta"] = c.theta;
  if (!c.rng_stream.empty()) j["rng_stream"] = c.rng_stream;
  if (c.syndromes.has_value()) {
    j["syndromes"] = {{"period", format_duration(c.syndromes->period)},
                      {"rounds", c.syndromes->rounds},
                      {"distance", c.syndromes->distance},
                      {"physical_error", c.syndromes->physical_error}};
  }
  return j;
}

CircuitSpec circuit_from_json(const nlohmann::json& j) {
  CircuitSpec c;
  c.id = j.value("id", std::string{});
  c.num_qubits = j.value("num_qubits", 0);
  c.two_qubit_gate_count = j.value("two_qubit_gate_count", 0);
  c.kind = circuit_kind_from_string(j.value("kind", "GroundStateSampler"));
  if (j.contains("model")) c.model = model_from_json(j.at("model"));
  c.shots = j.value("shots", 0);
  if (j.contains("theta")) c.theta = j.at("theta").get<std::vector<double>>();
  c.rng_stream = j.value("rng_stream", std::string{});
  if (j.contains("syndromes")) {
    const auto& js = j.at("syndromes");
    SyndromeSpec s;
    const auto& period = js.at("period");
    s.period = period.is_string() ? parse_duration(period.get<std::string>())
                                  : Duration(period.get<std::int64_t>());
    s.rounds = js.at("rounds").get<int>();
    s.distance = js.at("distance").get<int>();
    s.physical_error = js.at("physical_error").get<double>();
    c.syndromes = s;
  }
  return c;
}

nlohmann::json sample_set_to_json(const SampleSet& s) {
  nlohmann::json strings = nlohmann::json::array();
  for (const Bitstring x : s.bitstrings) {
    strings.push_back(bitstring_to_string(x, s.width));
  }
  return {{"circuit_id", s.circuit_id},
          {"width", s.width},
          {"shots", s.shots()},
          {"execution_ns", s.execution_time.count()},
          {"bitstrings", std::move(strings)}};
}

SampleSet sample_set_from_json(const nlohmann::json& j) {
  SampleSet s;
  s.circuit_id = j.value("circuit_id", std::string{});
  s.width = j.at("width").get<int>();
  s.execution_time = Duration(j.value("execution_ns", std::int64_t{0}));
  for (const auto& str : j.at("bitstrings")) {
    s.bitstrings.push_back(bitstring_from_string(str.get<std::string>()));
  }
  return s;
}

std::uint64_t circuit_wire_bytes(const CircuitSpec& circuit) {
  return circuit_to_json(circuit).dump().size();
}

std::uint64_t sample_set_wire_bytes(const SampleSet& samples) {
  // width+1 bytes per printed bitstring plus a fixed envelope.
  return 128 +
         static_cast<std::uint64_t>(samples.bitstrings.size()) *
             static_cast<std::uint64_t>(samples.width + 1);
}

}  // namespace qcsc::qpu
