#pragma once

#include <array>
#include <vector>

#include "qoz/grid.hpp"
#include "qoz/potentials.hpp"
#include "qoz/types.hpp"

namespace qoz {

/// Truncated expansion at one phase point. terms[n] is the full n-th order
/// contribution (coefficient times the expansion-parameter power), so value
/// is always the plain sum of terms.
struct SeriesResult {
  int order = 0;
  Complex value{0.0, 0.0};
  std::vector<Complex> terms;
};

/// Dense derivative tensors of the total potential energy over the m = N*dim
/// flattened particle coordinates. Order-k entries use row-major k-index
/// layout over [m]^k. Built once per phase point; the coefficient functions
/// below are contractions of these.
struct PotentialTensors {
  std::size_t m = 0;
  double value = 0.0;
  std::vector<double> g;   // gradient,   [m]
  std::vector<double> h;   // hessian,    [m^2]
  std::vector<double> t3;  // 3rd order,  [m^3]
  std::vector<double> t4;  // 4th order,  [m^4]
};

PotentialTensors potential_tensors(const Configuration& config,
                                   const PotentialModel& model,
                                   const ThermalSystem& sys);

/// Scalar contractions of the potential tensors with the momenta; the
/// building blocks of every coefficient function.
struct PotentialContractions {
  double lap_u = 0;           // tr hessian
  double p_grad_u = 0;        // p . grad
  double grad_sq = 0;         // grad . grad
  double pp_hess = 0;         // p p : hessian
  double biharmonic = 0;      // tr tr t4
  double p_grad_lap = 0;      // p . grad(lap)
  double ppp_t3 = 0;          // p p p : t3
  double p_gradu_hess = 0;    // p_a g_b h_ab
  double p4_t4 = 0;           // (p.grad)^4 u
  double gradu_pp_t3 = 0;     // g_a p_b p_c t3_abc
  double gugu_hess = 0;       // g_a g_b h_ab
  double gradu_grad_lap = 0;  // g_a d_a(lap)
  double pp_lap_hess = 0;     // p_a p_b d_a d_b (lap)
  double lap_grad_sq = 0;     // lap of grad.grad
  double p_hess_sq = 0;       // |p . hessian|^2
  double hess_frob = 0;       // h : h
};

PotentialContractions potential_contractions(const PotentialTensors& t,
                                             const Configuration& config);

/// Inverse-temperature expansion coefficients of the commutation function,
/// [1, 0, w2, (w3)]; up_to must be 2 or 3.
std::vector<Complex> omega_coefficients(const Configuration& config,
                                        const PotentialModel& model,
                                        const ThermalSystem& sys, int up_to);

/// Sum of omega_n beta^n through the requested order.
SeriesResult omega_series_eval(const Configuration& config, const PotentialModel& model,
                               const ThermalSystem& sys, int up_to);

/// Closed-form coefficients of the effective potential expansion in powers
/// of hbar; index n-1 holds W_n for n = 1..4.
std::array<Complex, 4> w_coefficients(const Configuration& config,
                                      const PotentialModel& model,
                                      const ThermalSystem& sys);

/// Sum of W_n hbar^n through `order` (at most 4; the closed forms stop there).
SeriesResult w_series_eval(const Configuration& config, const PotentialModel& model,
                           const ThermalSystem& sys, int order);

/// Grid recursion for the omega coefficients in one dimension. Spatial
/// derivatives use second-order central differences, one-sided at the ends.
struct OmegaRecursion1D {
  Axis axis;
  /// orders[n] is the omega_n grid, n = 0..n_max.
  std::vector<std::vector<Complex>> orders;
  /// The two boundary nodes of every grid use one-sided stencils.
  bool one_sided_boundaries = true;
};

OmegaRecursion1D omega_recursion_1d(const Axis& axis, const std::vector<double>& u_grid,
                                    double p, const ThermalSystem& sys, int n_max);

}  // namespace qoz
