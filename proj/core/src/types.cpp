#include "qoz/types.hpp"

namespace qoz {

ThermalSystem::ThermalSystem(double beta_, double hbar_, double mass_, int dim_)
    : beta(beta_), hbar(hbar_), mass(mass_), dim(dim_) {
  if (!(beta > 0.0)) throw std::invalid_argument("ThermalSystem: beta must be > 0");
  if (!(hbar > 0.0)) throw std::invalid_argument("ThermalSystem: hbar must be > 0");
  if (!(mass > 0.0)) throw std::invalid_argument("ThermalSystem: mass must be > 0");
  if (dim < 1 || dim > 3) throw std::invalid_argument("ThermalSystem: dim must be 1, 2 or 3");
  if (!std::isfinite(thermal_wavelength()))
    throw std::invalid_argument("ThermalSystem: thermal wavelength not finite");
}

Configuration::Configuration(std::vector<Vec> q, std::vector<Vec> p)
    : positions(std::move(q)), momenta(std::move(p)) {
  if (positions.empty())
    throw std::invalid_argument("Configuration: need at least one particle");
  if (positions.size() != momenta.size())
    throw std::invalid_argument("Configuration: positions/momenta size mismatch");
}

}  // namespace qoz
