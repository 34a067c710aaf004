#pragma once

#include <optional>
#include <vector>

#include "qoz/fft.hpp"
#include "qoz/grid.hpp"
#include "qoz/potentials.hpp"
#include "qoz/types.hpp"

namespace qoz {

/// Pair-function table in Fourier space: one (k_x, k_z) plane per stored
/// momentum slice. k axes are FFT-ordered with spacing 2*pi/extent; the
/// matching position grid is the centered square of side `extent` with
/// n nodes per side.
struct SpectralPairField {
  std::vector<double> p_axis;
  int n = 0;
  double extent = 0.0;
  std::vector<Complex> data;  // [p][ikx][ikz]

  SpectralPairField() = default;
  SpectralPairField(std::vector<double> p_axis_, int n_, double extent_);

  double dk() const { return 2.0 * kPi / extent; }
  double k_of(std::size_t idx) const {
    return dk() * fft_mode(idx, static_cast<std::size_t>(n));
  }
  std::size_t slice_size() const {
    return static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  }
  Complex* slice(std::size_t ip) { return data.data() + ip * slice_size(); }
  const Complex* slice(std::size_t ip) const { return data.data() + ip * slice_size(); }
  Complex& at(std::size_t ip, std::size_t ix, std::size_t iz) {
    return data[(ip * static_cast<std::size_t>(n) + ix) * static_cast<std::size_t>(n) + iz];
  }
  const Complex& at(std::size_t ip, std::size_t ix, std::size_t iz) const {
    return data[(ip * static_cast<std::size_t>(n) + ix) * static_cast<std::size_t>(n) + iz];
  }
};

/// Short-range smoothing parameters for hard-core potentials ahead of the
/// Fourier transform.
struct FourierRegularization {
  double r_c;
  double u_cap = 0.0;
};

/// Radial Fourier transform of the pair potential by quadrature,
/// 2D: u_hat(k) = 2 pi * int_0^inf r u(r) J0(k r) dr. Throws if the
/// potential has a hard core and no regularization is supplied.
std::vector<double> pair_potential_ft_radial(const RadialPotential& pair,
                                             const std::vector<double>& k_values,
                                             const std::optional<FourierRegularization>& reg);

/// u_hat on the n x n FFT-ordered (k_x, k_z) grid of a box of side `extent`.
std::vector<double> pair_potential_ft(const RadialPotential& pair, int n, double extent,
                                      const std::optional<FourierRegularization>& reg);

/// 1D transform u_hat(k) = 2 int_0^inf u(r) cos(k r) dr, same conventions.
std::vector<double> pair_potential_ft_radial_1d(
    const RadialPotential& pair, const std::vector<double>& k_values,
    const std::optional<FourierRegularization>& reg);

/// Drift/diffusion factor of the linearized equation,
/// b = -hbar p_z k_z / m - hbar^2 k^2 / m with k^2 = k_x^2 + k_z^2.
double b_factor(double p_z, double kx, double kz, const ThermalSystem& sys);

/// Closed-form linear solution (-u_hat/b)(e^{beta b} - 1); switches to the
/// cancellation-free series -u_hat beta (1 + x/2 + x^2/6), x = beta b, for
/// |beta b| < 1e-8.
Complex linear_solution_value(double u_hat, double b, double beta);

/// Linear pair solution on every (p, k) node.
SpectralPairField linear_solution(const std::vector<double>& u_hat,
                                  const std::vector<double>& p_axis, int n, double extent,
                                  const ThermalSystem& sys, double beta);

/// Per-slice inverse FFT to the centered position grid; result is a rank-3
/// table over (p, q_x, q_z). Requires an even node count and a uniform
/// p axis.
ComplexGrid inverse_to_table(const SpectralPairField& spectral);

/// Forward transform of one centered-position-space slice (inverse of the
/// per-slice operation above).
std::vector<Complex> forward_slice(const std::vector<Complex>& w_position, int n,
                                   double extent, Fft& fft);
std::vector<Complex> backward_slice(const std::vector<Complex>& w_spectral, int n,
                                    double extent, Fft& fft);

/// Quadratic term of the transformed evolution equation,
/// -(hbar^2 / (2 pi)^2 m) int dk' k'.(k-k') w(k') w(k-k'), evaluated by FFT
/// with the 2/3-rule (modes with |index| > n/3 zeroed before and after).
std::vector<Complex> quadratic_term_spectral(const std::vector<Complex>& w_hat, int n,
                                             double extent, const ThermalSystem& sys,
                                             Fft& fft, bool dealias = true);

/// First correction beyond the linear solution: the quadratic term fed with
/// the linear solution and propagated in beta by Gauss-Legendre quadrature.
/// ratio = max|correction| / max|linear| measures where the linear solution
/// can be trusted.
struct NonlinearCorrection {
  SpectralPairField field;
  double max_ratio = 0.0;
  std::vector<double> slice_ratio;
};

NonlinearCorrection first_nonlinear_correction(const std::vector<double>& u_hat,
                                               const std::vector<double>& p_axis, int n,
                                               double extent, const ThermalSystem& sys,
                                               double beta, int gauss_nodes = 12);

}  // namespace qoz
