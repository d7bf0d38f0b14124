#pragma once

#include <map>
#include <span>
#include <vector>

#include "qcsc/qpu/circuit.hpp"

namespace qcsc::wl {

// Per-qubit 2x2 column-stochastic readout confusion matrix:
// m[measured][true]; columns sum to 1.
struct ConfusionMatrix {
  double m[2][2] = {{1.0, 0.0}, {0.0, 1.0}};

  static ConfusionMatrix symmetric(double flip_probability);
  double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
};

std::map<Bitstring, std::uint64_t> histogram(const qpu::SampleSet& samples);

// Tensor-product forward application of the confusion matrices to a dense
// distribution (test support: the noisy channel itself).
std::vector<double> apply_confusion(std::span<const double> distribution,
                                    std::span<const ConfusionMatrix> matrices,
                                    int width);

// Inverse-confusion readout mitigation: applies each qubit's M^-1 along its
// axis of the empirical distribution. The output sums to 1 but may carry
// negative entries (a quasi-distribution), indexed by bitstring value.
// Errors: SingularMatrix (|det| below 1e-12).
std::vector<double> readout_mitigation(
    const std::map<Bitstring, std::uint64_t>& counts,
    std::span<const ConfusionMatrix> matrices, int width);

}  // namespace qcsc::wl
