#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace qoz {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Point or vector in d <= 3 dimensions. Components beyond the active
/// dimension are kept at zero so dot products and norms never branch on d.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};

  Vec() = default;
  explicit Vec(double x) : c{x, 0.0, 0.0} {}
  Vec(double x, double y) : c{x, y, 0.0} {}
  Vec(double x, double y, double z) : c{x, y, z} {}

  double& operator[](std::size_t i) { return c[i]; }
  double operator[](std::size_t i) const { return c[i]; }

  Vec operator+(const Vec& o) const { return {c[0] + o.c[0], c[1] + o.c[1], c[2] + o.c[2]}; }
  Vec operator-(const Vec& o) const { return {c[0] - o.c[0], c[1] - o.c[1], c[2] - o.c[2]}; }
  Vec operator-() const { return {-c[0], -c[1], -c[2]}; }
  Vec operator*(double s) const { return {c[0] * s, c[1] * s, c[2] * s}; }

  double dot(const Vec& o) const { return c[0] * o.c[0] + c[1] * o.c[1] + c[2] * o.c[2]; }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }
};

/// Inverse temperature, Planck constant, particle mass and dimensionality.
/// Immutable after construction; fixes the reduced-unit convention of a run.
struct ThermalSystem {
  double beta;
  double hbar;
  double mass;
  int dim;

  ThermalSystem(double beta_, double hbar_, double mass_, int dim_);

  /// hbar * sqrt(beta/mass); the length scale below which the quantum
  /// corrections are order one.
  double thermal_wavelength() const { return hbar * std::sqrt(beta / mass); }

  ThermalSystem with_beta(double b) const { return {b, hbar, mass, dim}; }
  ThermalSystem with_mass(double m) const { return {beta, hbar, m, dim}; }
};

/// N-particle phase-space point.
struct Configuration {
  std::vector<Vec> positions;
  std::vector<Vec> momenta;

  Configuration() = default;
  Configuration(std::vector<Vec> q, std::vector<Vec> p);

  std::size_t size() const { return positions.size(); }

  static Configuration single_1d(double q, double p) {
    return Configuration({Vec(q)}, {Vec(p)});
  }
};

}  // namespace qoz
