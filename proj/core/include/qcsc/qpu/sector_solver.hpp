#pragma once

#include <vector>

#include "qcsc/qpu/toy_model.hpp"

namespace qcsc::qpu {

struct SectorGroundState {
  double energy = 0.0;
  std::vector<Bitstring> basis;      // ascending masks, sector k
  std::vector<double> amplitudes;    // unit norm, aligned with basis
};

// Exact ground state of the model restricted to its magnetization sector.
// Restarted Lanczos with full in-block reorthogonalization over an on-the-fly
// matvec; handles every sector dimension up to the 24-site cap. Deterministic
// (fixed internal start vector, fixed sign convention).
SectorGroundState sector_ground_state(const ToyModel& model);

}  // namespace qcsc::qpu
