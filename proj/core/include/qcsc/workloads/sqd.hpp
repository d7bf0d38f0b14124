#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qcsc/qpu/circuit.hpp"
#include "qcsc/qpu/toy_model.hpp"
#include "qcsc/sim/rng.hpp"
#include "qcsc/tcg/graph.hpp"

namespace qcsc::wl {

// Per-site mean occupation computed from the current subspace eigenvector;
// the feedback signal of the SQD loop.
struct OccupancyVector {
  std::vector<double> n;  // entries in [0, 1], length = sites
};

// Exact split by Hamming weight; multiplicities preserved.
std::pair<std::vector<Bitstring>, std::vector<Bitstring>> partition_by_hamming(
    const qpu::SampleSet& samples, int k);

// Repairs x to weight k with exactly |weight(x) - k| flips. Raising picks a
// zero bit with probability proportional to occupancy[i]; lowering picks a
// one bit proportional to 1 - occupancy[i]; an all-zero eligible weight set
// falls back to uniform.
Bitstring configuration_recovery(Bitstring x, int k,
                                 const OccupancyVector& occupancy,
                                 sim::RngStream& rng);

// Up to m distinct strings drawn without replacement, weighted by multiset
// multiplicity. Result sorted ascending (deterministic downstream order).
std::vector<Bitstring> subsample(const std::vector<Bitstring>& pool, int m,
                                 sim::RngStream& rng);

struct SubspaceDiagonalization {
  double energy = 0.0;
  std::vector<double> coefficients;  // unit norm, aligned with the subspace
};

// Lowest eigenpair of the model Hamiltonian restricted to span(subspace).
// The subspace must be sorted ascending and lie in one weight sector.
// Errors: EmptySubspace.
SubspaceDiagonalization project_diagonalize(const qpu::ToyModel& model,
                                            const std::vector<Bitstring>& subspace);

OccupancyVector occupancy_update(std::span<const double> coefficients,
                                 const std::vector<Bitstring>& subspace,
                                 int sites);

struct SqdConfig {
  qpu::ToyModel model;
  int shots = 1000;
  int two_qubit_gates = 0;
  int subsample_m = 50;
  int max_iters = 20;
  double tol = 1e-6;
  tcg::CostModel classical_cost;
};

struct SqdState {
  int iteration = 0;
  std::vector<Bitstring> subspace;
  double energy = 0.0;
  OccupancyVector occupancy;
  bool converged = false;
};

// One classical pass over a fresh SampleSet: partition -> recover incorrect
// samples -> combine with the correct group -> subsample -> diagonalize ->
// occupancy update. The first iteration starts from a uniform k/sites
// occupancy prior.
SqdState sqd_classical_update(const SqdConfig& config, const SqdState& previous,
                              const qpu::SampleSet& samples,
                              sim::RngStream& rng);

struct SqdIterationRecord {
  int iteration = 0;
  double energy = 0.0;
  int subspace_size = 0;
  int correct_samples = 0;
  int recovered_samples = 0;
  std::string qpu_job_id;
  VTime submitted{0};
  VTime samples_ready{0};
  VTime classical_done{0};
};

struct SqdTrace {
  std::vector<SqdIterationRecord> iterations;
  SqdState final_state;
  bool converged = false;
  std::string failure;
};

// How a workload reaches the QPU and spends classical time; concrete
// sessions route through qrmi (and optionally the scheduler) so the loop
// logic stays identical across batch and co-allocated modes.
struct QuantumSession {
  std::function<void(const qpu::CircuitSpec&,
                     std::function<void(const std::string& job_id,
                                        const qpu::SampleSet&)>)>
      sample;
  std::function<void(Duration, std::function<void()>)> classical_phase;
  std::function<VTime()> now;
  // Returns false once the enclosing allocation window has expired.
  std::function<bool()> window_ok;
};

// Self-consistent loop: sample -> classical update, repeated until
// |E_t - E_{t-1}| < tol or max_iters. One QPU submission per iteration.
void sqd_run(const SqdConfig& config, std::uint64_t seed,
             const std::string& rng_scope, QuantumSession session,
             std::function<void(SqdTrace)> on_done);

struct ClosedLoopConfig {
  SqdConfig sqd;
  double theta0 = 0.0;
  double step0 = 1.5707963267948966;  // pi/2
  int max_outer = 20;
  double tol = 1e-6;
};

struct ClosedLoopRecord {
  int iteration = 0;
  double theta = 0.0;
  double energy = 0.0;
  bool accepted = false;
  VTime qpu_start{0};
  VTime qpu_end{0};
  VTime classical_end{0};
};

struct ClosedLoopTrace {
  std::vector<ClosedLoopRecord> iterations;
  double theta = 0.0;
  double energy = 0.0;
  bool converged = false;
  std::string failure;  // set on AllocationExpired
};

// Derivative-free coordinate search over theta with direction flips and
// halving steps; each outer iteration evaluates one theta through the inner
// pipeline. Terminates on energy convergence, the iteration cap, or an
// expired allocation window (failure = AllocationExpired).
void closed_loop_sqd(const ClosedLoopConfig& config, std::uint64_t seed,
                     const std::string& rng_scope, QuantumSession session,
                     std::function<void(ClosedLoopTrace)> on_done);

}  // namespace qcsc::wl
