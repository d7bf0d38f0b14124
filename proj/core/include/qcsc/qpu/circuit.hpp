#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qcsc/bitstring.hpp"
#include "qcsc/qpu/toy_model.hpp"
#include "qcsc/time.hpp"

namespace qcsc::qpu {

enum class CircuitKind { GroundStateSampler, ParameterizedSampler, SyndromeEmitter };

const char* circuit_kind_name(CircuitKind kind);
CircuitKind circuit_kind_from_string(const std::string& name);

// Parameters of a syndrome-emission task (kind == SyndromeEmitter): one
// distance-d repetition-code measurement batch per period, physical bits
// flipped with probability p.
struct SyndromeSpec {
  Duration period{0};
  int rounds = 0;
  int distance = 0;
  double physical_error = 0.0;
};

struct CircuitSpec {
  std::string id;
  int num_qubits = 0;
  int two_qubit_gate_count = 0;
  CircuitKind kind = CircuitKind::GroundStateSampler;
  ToyModel model;
  std::vector<double> theta;  // ParameterizedSampler only
  int shots = 0;
  std::optional<SyndromeSpec> syndromes;  // SyndromeEmitter only
  // Named randomness source for the sampling noise; callers pick it so one
  // workload's draws never depend on another's submission order.
  std::string rng_stream;
};

// Errors: InvalidCircuit (shots, width/model mismatch, theta presence),
// InvalidTheta, ModelTooLarge, InvalidDistance.
void validate_circuit(const CircuitSpec& circuit);

struct SampleSet {
  std::string circuit_id;
  int width = 0;
  std::vector<Bitstring> bitstrings;  // multiset; one entry per shot
  Duration execution_time{0};

  int shots() const { return static_cast<int>(bitstrings.size()); }
};

nlohmann::json circuit_to_json(const CircuitSpec& circuit);
CircuitSpec circuit_from_json(const nlohmann::json& j);
nlohmann::json sample_set_to_json(const SampleSet& samples);
SampleSet sample_set_from_json(const nlohmann::json& j);

// Serialized size used for transfer modeling.
std::uint64_t circuit_wire_bytes(const CircuitSpec& circuit);
std::uint64_t sample_set_wire_bytes(const SampleSet& samples);

}  // namespace qcsc::qpu
