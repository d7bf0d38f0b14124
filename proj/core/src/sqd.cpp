#include "qcsc/workloads/sqd.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <unordered_map>

#include "qcsc/math.hpp"

namespace qcsc::wl {

std::pair<std::vector<Bitstring>, std::vector<Bitstring>> partition_by_hamming(
    const qpu::SampleSet& samples, int k) {
  if (k > samples.width) {
    raise(ErrorCode::InvalidSpec, "k exceeds sample width");
  }
  std::pair<std::vector<Bitstring>, std::vector<Bitstring>> out;
  for (const Bitstring x : samples.bitstrings) {
    (hamming_weight(x) == k ? out.first : out.second).push_back(x);
  }
  return out;
}

Bitstring configuration_recovery(Bitstring x, int k,
                                 const OccupancyVector& occupancy,
                                 sim::RngStream& rng) {
  const int width = static_cast<int>(occupancy.n.size());
  int weight = hamming_weight(x);
  std::vector<double> weights(static_cast<std::size_t>(width));
  while (weight != k) {
    const bool raising = weight < k;
    double total = 0.0;
    for (int i = 0; i < width; ++i) {
      const bool eligible = raising ? ((x >> i) & 1u) == 0 : ((x >> i) & 1u) == 1;
      const double w =
          eligible ? (raising ? occupancy.n[static_cast<std::size_t>(i)]
                              : 1.0 - occupancy.n[static_cast<std::size_t>(i)])
                   : 0.0;
      weights[static_cast<std::size_t>(i)] = w;
      total += w;
    }
    if (total <= 0.0) {
      // Degenerate flip law: uniform over eligible bits.
      for (int i = 0; i < width; ++i) {
        const bool eligible =
            raising ? ((x >> i) & 1u) == 0 : ((x >> i) & 1u) == 1;
        weights[static_cast<std::size_t>(i)] = eligible ? 1.0 : 0.0;
      }
    }
    const std::size_t flip = rng.categorical(weights);
    x ^= Bitstring{1} << flip;
    weight += raising ? 1 : -1;
  }
  return x;
}

std::vector<Bitstring> subsample(const std::vector<Bitstring>& pool, int m,
                                 sim::RngStream& rng) {
  if (m <= 0) raise(ErrorCode::InvalidSpec, "subsample m must be > 0");
  std::map<Bitstring, double> multiplicity;
  for (const Bitstring x : pool) multiplicity[x] += 1.0;

  std::vector<Bitstring> distinct;
  std::vector<double> weights;
  distinct.reserve(multiplicity.size());
  for (const auto& [x, count] : multiplicity) {
    distinct.push_back(x);
    weights.push_back(count);
  }

  std::vector<Bitstring> chosen;
  const std::size_t take =
      std::min<std::size_t>(static_cast<std::size_t>(m), distinct.size());
  for (std::size_t draw = 0; draw < take; ++draw) {
    const std::size_t idx = rng.categorical(weights);
    chosen.push_back(distinct[idx]);
    weights[idx] = 0.0;
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

SubspaceDiagonalization project_diagonalize(
    const qpu::ToyModel& model, const std::vector<Bitstring>& subspace) {
  if (subspace.empty()) {
    raise(ErrorCode::EmptySubspace, "cannot diagonalize over nothing");
  }
  const std::size_t dim = subspace.size();
  std::unordered_map<Bitstring, std::size_t> index;
  index.reserve(dim * 2);
  for (std::size_t i = 0; i < dim; ++i) index.emplace(subspace[i], i);

  std::vector<double> h(dim * dim, 0.0);
  for (std::size_t i = 0; i < dim; ++i) {
    h[i * dim + i] = diagonal_element(model, subspace[i]);
    for_each_offdiagonal(model, subspace[i], [&](Bitstring y, double amp) {
      const auto it = index.find(y);
      if (it != index.end()) h[i * dim + it->second] += amp;
    });
  }

  math::LowestEigenpair pair = math::jacobi_lowest_eigenpair(std::move(h), dim);
  return SubspaceDiagonalization{pair.value, std::move(pair.vector)};
}

OccupancyVector occupancy_update(std::span<const double> coefficients,
                                 const std::vector<Bitstring>& subspace,
                                 int sites) {
  OccupancyVector out;
  out.n.assign(static_cast<std::size_t>(sites), 0.0);
  for (std::size_t j = 0; j < subspace.size(); ++j) {
    const double p = coefficients[j] * coefficients[j];
    for (int i = 0; i < sites; ++i) {
      if ((subspace[j] >> i) & 1u) out.n[static_cast<std::size_t>(i)] += p;
    }
  }
  return out;
}

SqdState sqd_classical_update(const SqdConfig& config, const SqdState& previous,
                              const qpu::SampleSet& samples,
                              sim::RngStream& rng) {
  const int k = config.model.magnetization_k;
  OccupancyVector occupancy = previous.occupancy;
  if (occupancy.n.empty()) {
    occupancy.n.assign(static_cast<std::size_t>(config.model.sites),
                       static_cast<double>(k) / config.model.sites);
  }

  auto [correct, incorrect] = partition_by_hamming(samples, k);
  auto recovery_rng = rng.child("recovery");
  std::vector<Bitstring> combined = correct;
  combined.reserve(samples.bitstrings.size());
  for (const Bitstring x : incorrect) {
    combined.push_back(configuration_recovery(x, k, occupancy, recovery_rng));
  }

  auto subsample_rng = rng.child("subsample");
  std::vector<Bitstring> subspace =
      subsample(combined, config.subsample_m, subsample_rng);

  const SubspaceDiagonalization diag =
      project_diagonalize(config.model, subspace);

  SqdState next;
  next.iteration = previous.iteration + 1;
  next.subspace = std::move(subspace);
  next.energy = diag.energy;
  next.occupancy =
      occupancy_update(diag.coefficients, next.subspace, config.model.sites);
  next.converged = previous.iteration > 0 &&
                   std::abs(diag.energy - previous.energy) < config.tol;
  return next;
}

namespace {

qpu::CircuitSpec make_sampler_circuit(const SqdConfig& config,
                                      const std::string& id,
                                      const std::string& rng_stream,
                                      std::optional<double> theta) {
  qpu::CircuitSpec circuit;
  circuit.id = id;
  circuit.num_qubits = config.model.sites;
  circuit.two_qubit_gate_count = config.two_qubit_gates;
  circuit.model = config.model;
  circuit.shots = config.shots;
  circuit.rng_stream = rng_stream;
  if (theta) {
    circuit.kind = qpu::CircuitKind::ParameterizedSampler;
    circuit.theta = {*theta};
  } else {
    circuit.kind = qpu::CircuitKind::GroundStateSampler;
  }
  return circuit;
}

struct SqdLoop : std::enable_shared_from_this<SqdLoop> {
  SqdConfig config;
  std::uint64_t seed;
  std::string scope;
  QuantumSession session;
  std::function<void(SqdTrace)> on_done;
  SqdTrace trace;
  SqdState state;

  void iterate() {
    if (session.window_ok && !session.window_ok()) {
      trace.failure = "AllocationExpired";
      finish(false);
      return;
    }
    const int i = state.iteration;
    const std::string stream = scope + "/iter" + std::to_string(i) + "/samples";
    const qpu::CircuitSpec circuit = make_sampler_circuit(
        config, "sqd-" + scope + "-i" + std::to_string(i), stream, std::nullopt);

    SqdIterationRecord rec;
    rec.iteration = i + 1;
    rec.submitted = session.now();
    auto self = shared_from_this();
    session.sample(circuit, [self, rec](const std::string& job_id,
                                        const qpu::SampleSet& samples) mutable {
      rec.qpu_job_id = job_id;
      rec.samples_ready = self->session.now();
      auto rng = sim::RngStream(self->seed, self->scope + "/iter" +
                                                 std::to_string(self->state.iteration) +
                                                 "/classical");
      const auto split =
          partition_by_hamming(samples, self->config.model.magnetization_k);
      rec.correct_samples = static_cast<int>(split.first.size());
      rec.recovered_samples = static_cast<int>(split.second.size());
      const SqdState next =
          sqd_classical_update(self->config, self->state, samples, rng);
      const Duration classical_time = self->config.classical_cost.eval(
          qpu::sample_set_wire_bytes(samples));
      self->session.classical_phase(classical_time, [self, rec, next]() mutable {
        rec.classical_done = self->session.now();
        rec.energy = next.energy;
        rec.subspace_size = static_cast<int>(next.subspace.size());
        self->trace.iterations.push_back(rec);
        self->state = next;
        if (next.converged) {
          self->finish(true);
        } else if (next.iteration >= self->config.max_iters) {
          self->finish(false);
        } else {
          self->iterate();
        }
      });
    });
  }

  void finish(bool converged) {
    trace.converged = converged;
    trace.final_state = state;
    on_done(std::move(trace));
  }
};

struct ClosedLoop : std::enable_shared_from_this<ClosedLoop> {
  ClosedLoopConfig config;
  std::uint64_t seed;
  std::string scope;
  QuantumSession session;
  std::function<void(ClosedLoopTrace)> on_done;
  ClosedLoopTrace trace;

  SqdState state;       // occupancy/subspace feedback across evaluations
  double theta_best = 0.0;
  double energy_best = 0.0;
  bool have_best = false;
  int direction = 1;
  double step = 0.0;
  int evaluations = 0;
  double theta_eval = 0.0;

  void start() {
    step = config.step0;
    theta_eval = config.theta0;
    evaluate();
  }

  void evaluate() {
    if (session.window_ok && !session.window_ok()) {
      trace.failure = "AllocationExpired";
      finish(false);
      return;
    }
    if (evaluations >= config.max_outer) {
      finish(false);
      return;
    }
    const int i = evaluations++;
    const std::string stream =
        scope + "/outer" + std::to_string(i) + "/samples";
    const qpu::CircuitSpec circuit =
        make_sampler_circuit(config.sqd, "cl-" + scope + "-o" + std::to_string(i),
                             stream, theta_eval);
    ClosedLoopRecord rec;
    rec.iteration = i + 1;
    rec.theta = theta_eval;
    rec.qpu_start = session.now();
    auto self = shared_from_this();
    session.sample(circuit, [self, rec](const std::string&,
                                        const qpu::SampleSet& samples) mutable {
      rec.qpu_end = self->session.now();
      auto rng = sim::RngStream(self->seed, self->scope + "/outer" +
                                                 std::to_string(rec.iteration - 1) +
                                                 "/classical");
      const SqdState next =
          sqd_classical_update(self->config.sqd, self->state, samples, rng);
      const Duration classical_time = self->config.sqd.classical_cost.eval(
          qpu::sample_set_wire_bytes(samples));
      self->session.classical_phase(classical_time, [self, rec, next]() mutable {
        rec.classical_end = self->session.now();
        rec.energy = next.energy;
        self->state = next;
        self->step_search(rec);
      });
    });
  }

  void step_search(ClosedLoopRecord rec) {
    bool converged = false;
    if (!have_best) {
      have_best = true;
      theta_best = rec.theta;
      energy_best = rec.energy;
      rec.accepted = true;
    } else if (rec.energy < energy_best) {
      const double improvement = energy_best - rec.energy;
      theta_best = rec.theta;
      energy_best = rec.energy;
      rec.accepted = true;
      converged = improvement < config.tol;
    } else {
      rec.accepted = false;
      if (direction == 1) {
        direction = -1;
      } else {
        // Both directions rejected at this step: the best energy did not
        // move over the round, which is the |dE| < tol rule with dE = 0.
        direction = 1;
        step *= 0.5;
        converged = true;
      }
    }
    trace.iterations.push_back(rec);
    if (converged) {
      finish(true);
      return;
    }
    theta_eval = theta_best + direction * step;
    evaluate();
  }

  void finish(bool converged) {
    trace.converged = converged;
    trace.theta = theta_best;
    trace.energy = energy_best;
    on_done(std::move(trace));
  }
};

}  // namespace

void sqd_run(const SqdConfig& config, std::uint64_t seed,
             const std::string& rng_scope, QuantumSession session,
             std::function<void(SqdTrace)> on_done) {
  validate_model(config.model);
  auto loop = std::make_shared<SqdLoop>();
  loop->config = config;
  loop->seed = seed;
  loop->scope = rng_scope;
  loop->session = std::move(session);
  loop->on_done = std::move(on_done);
  loop->iterate();
}

void closed_loop_sqd(const ClosedLoopConfig& config, std::uint64_t seed,
                     const std::string& rng_scope, QuantumSession session,
                     std::function<void(ClosedLoopTrace)> on_done) {
  validate_model(config.sqd.model);
  auto loop = std::make_shared<ClosedLoop>();
  loop->config = config;
  loop->seed = seed;
  loop->scope = rng_scope;
  loop->session = std::move(session);
  loop->on_done = std::move(on_done);
  loop->start();
}

}  // namespace qcsc::wl
