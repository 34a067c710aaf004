#include "qoz/hamiltonian.hpp"

#include <limits>

namespace qoz {

HamiltonianResult classical_hamiltonian(const Configuration& config,
                                        const PotentialModel& model,
                                        const ThermalSystem& sys) {
  HamiltonianResult out;
  const std::size_t n = config.size();

  for (std::size_t j = 0; j < n; ++j)
    out.value += config.momenta[j].norm2() / (2.0 * sys.mass);

  if (model.singlet) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec& q = config.positions[j];
      const double r = (sys.dim == 1) ? q[0] : q.norm();
      out.value += model.singlet->eval(r, 0);
    }
  }

  if (model.pair) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const double r = (config.positions[j] - config.positions[k]).norm();
        if (r == 0.0 && model.pair->diverges_at_origin()) {
          out.value = std::numeric_limits<double>::infinity();
          out.overlap = true;
          return out;
        }
        out.value += model.pair->eval(r, 0);
      }
    }
  }
  return out;
}

}  // namespace qoz
