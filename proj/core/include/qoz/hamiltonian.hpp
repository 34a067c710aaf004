#pragma once

#include "qoz/potentials.hpp"
#include "qoz/types.hpp"

namespace qoz {

struct HamiltonianResult {
  double value = 0.0;
  /// Set when two particles coincide under a pair model that diverges there;
  /// value is +infinity in that case.
  bool overlap = false;
};

/// Sum of kinetic energy, singlet potentials and pair potentials.
HamiltonianResult classical_hamiltonian(const Configuration& config,
                                        const PotentialModel& model,
                                        const ThermalSystem& sys);

}  // namespace qoz
