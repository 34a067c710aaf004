#pragma once

#include <memory>
#include <stdexcept>

#include "qoz/types.hpp"

namespace qoz {

/// Scalar potential of one radial/1D argument with analytic derivatives up
/// to fourth order. Two parameterizations are exposed:
///   eval(r, n)   = d^n u / dr^n          (r is a separation or coordinate)
///   eval_s(s, n) = d^n U / ds^n,  s = r^2, U(s) = u(sqrt(s))
/// The squared-argument form makes Cartesian derivative tensors of
/// u(|x|) polynomial in the components of x and is exact for every model
/// supplied here.
class RadialPotential {
 public:
  virtual ~RadialPotential() = default;
  virtual double eval(double r, int order) const = 0;
  virtual double eval_s(double s, int order) const = 0;
  /// True if u(r) -> infinity as r -> 0.
  virtual bool diverges_at_origin() const { return false; }
  /// True if the bare potential can be Fourier transformed by quadrature.
  virtual bool fourier_safe() const { return true; }
};

/// 4 eps ((sigma/r)^12 - (sigma/r)^6)
class LennardJones final : public RadialPotential {
 public:
  LennardJones(double eps, double sigma);
  double eval(double r, int order) const override;
  double eval_s(double s, int order) const override;
  bool diverges_at_origin() const override { return true; }
  bool fourier_safe() const override { return false; }

  double eps() const { return eps_; }
  double sigma() const { return sigma_; }
  /// Position of the potential minimum, 2^(1/6) sigma.
  double r_min() const;

 private:
  double eps_, sigma_;
};

/// -depth * exp(-r^2 / 2 width^2); short ranged, finite everywhere.
class GaussianWell final : public RadialPotential {
 public:
  GaussianWell(double depth, double width);
  double eval(double r, int order) const override;
  double eval_s(double s, int order) const override;

  double depth() const { return depth_; }
  double width() const { return width_; }

 private:
  double depth_, width_;
};

/// m omega^2 r^2 / 2; the trap used for every confined test system.
class Harmonic final : public RadialPotential {
 public:
  Harmonic(double mass, double omega);
  double eval(double r, int order) const override;
  double eval_s(double s, int order) const override;

  double omega() const { return omega_; }
  double mass() const { return mass_; }

 private:
  double mass_, omega_;
};

/// Short-range smoothing for hard-core potentials ahead of a Fourier
/// transform: u(r) (1 - g(r)) + cap g(r) with g = exp(-(r/r_c)^12).
/// Only the value (order 0) is defined.
class RegularizedPotential final : public RadialPotential {
 public:
  RegularizedPotential(std::shared_ptr<const RadialPotential> base, double r_c, double cap);
  double eval(double r, int order) const override;
  double eval_s(double s, int order) const override;
  bool fourier_safe() const override { return true; }

 private:
  std::shared_ptr<const RadialPotential> base_;
  double r_c_, cap_;
};

/// Singlet (external) plus pair interaction; either part may be absent.
struct PotentialModel {
  std::shared_ptr<const RadialPotential> singlet;  // u1(q), may be null
  std::shared_ptr<const RadialPotential> pair;     // u2(r), may be null

  static PotentialModel pair_only(std::shared_ptr<const RadialPotential> p) {
    return {nullptr, std::move(p)};
  }
  static PotentialModel singlet_only(std::shared_ptr<const RadialPotential> s) {
    return {std::move(s), nullptr};
  }
};

/// d^n/dr^n of the Lennard-Jones pair potential; r <= 0 is a domain error.
double lj_pair_derivatives(double r, int order, double eps, double sigma);

/// d^n/dq^n of the harmonic singlet potential m omega^2 q^2 / 2.
double sho_singlet_derivatives(double q, int order, double mass, double omega);

}  // namespace qoz
