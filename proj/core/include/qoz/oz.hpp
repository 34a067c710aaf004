#pragma once

#include <optional>
#include <vector>

#include "qoz/grid.hpp"
#include "qoz/linear_fourier.hpp"
#include "qoz/potentials.hpp"
#include "qoz/symmetrization.hpp"
#include "qoz/types.hpp"

namespace qoz {

/// Shared discretization of the pair phase space: relative separation axis
/// q and a common momentum axis for both particles. The phase-space measure
/// is dq dp / (2 pi hbar) throughout.
struct PhaseAxes {
  Axis q;  // relative separation
  Axis p;  // single-particle momentum

  std::size_t field_size() const { return q.count * p.count * p.count; }
  std::size_t idx(std::size_t iq, std::size_t ip1, std::size_t ip2) const {
    return (iq * p.count + ip1) * p.count + ip2;
  }
};

/// Generalized bond function f = e^{-beta u} e^{w} e^{eta} - 1 on a relative
/// (p, q) grid; p is the full relative momentum p1 - p2.
struct MayerField {
  Axis p, q;
  std::vector<Complex> f;  // [p][q]

  Complex& at(std::size_t ip, std::size_t iq) { return f[ip * q.count + iq]; }
  const Complex& at(std::size_t ip, std::size_t iq) const { return f[ip * q.count + iq]; }
};

/// The three bond-exponent pieces tabulated on the solver grid. w2 and eta2
/// depend on the relative momentum; beta_u on separation only. Empty
/// vectors mean identically zero (classical / Boltzmann limits).
struct BondExponent {
  PhaseAxes axes;
  std::vector<double> beta_u;   // [q]
  std::vector<Complex> w2;      // [q][p1][p2] or empty
  std::vector<Complex> eta2;    // [q][p1][p2] or empty

  Complex exponent(std::size_t iq, std::size_t ip1, std::size_t ip2) const;
};

/// Total and direct correlation functions on the discretized pair phase
/// space plus the singlet momentum density (normalized against the
/// dq dp / 2 pi hbar measure).
struct CorrelationSet {
  PhaseAxes axes;
  std::vector<Complex> h, c;  // [q][p1][p2]
  std::vector<double> rho1;   // [p]
  Statistics statistics = Statistics::bose;
};

/// Maxwell singlet density at number density n, carrying the 2 pi hbar of
/// the measure so that int dq dp rho / (2 pi hbar) = N.
std::vector<double> rho1_maxwell(double n, const Axis& p_axis, const ThermalSystem& sys);

/// w2 for the solver from the 1D linearized closed form: for each relative
/// momentum, w_hat = (-u_hat/b)(e^{beta b} - 1) inverted to separation space.
std::vector<Complex> w2_linear_1d(const RadialPotential& pair, const PhaseAxes& axes,
                                  const ThermalSystem& sys,
                                  const std::optional<FourierRegularization>& reg);

/// Dimer symmetrization phase on every solver node; zero field for
/// Boltzmann statistics is expressed by an empty vector in BondExponent.
/// The phase is unimodular at every separation, so solvers need the Gaussian
/// damping exp(-(q/q_c)^2) to recover a decaying bond; q_c <= 0 disables it.
/// Results should be checked for independence of the damping scale.
std::vector<Complex> eta2_dimer_field(const PhaseAxes& axes, const ThermalSystem& sys,
                                      Statistics stats, double damping_scale = 0.0);

/// Generalized Mayer-f on the relative (p, q) grid from a bond exponent
/// table evaluated at p1 = p/2, p2 = -p/2.
MayerField mayer_f(const BondExponent& bond, const Axis& p_rel_axis);

/// Phase-space convolution int dG3 rho(G3) c(G1,G3) h(G3,G2) with trapezoid
/// weights and the dq dp / 2 pi hbar measure; fields are zero-extended
/// beyond the separation axis.
std::vector<Complex> oz_convolve(const std::vector<Complex>& c,
                                 const std::vector<Complex>& h,
                                 const std::vector<double>& rho1, const PhaseAxes& axes,
                                 const ThermalSystem& sys);

/// Hypernetted-chain closure h = -1 + exp(h - c - beta u + w + eta).
std::vector<Complex> hnc_closure(const std::vector<Complex>& h,
                                 const std::vector<Complex>& c, const BondExponent& bond);

struct PicardOptions {
  double mixing = 0.2;   // in (0, 1]
  int max_iter = 5000;
  double tol = 1e-8;     // max-norm change
};

struct ConvergenceReport {
  bool converged = false;
  int iterations = 0;
  std::vector<double> residuals;
};

struct PicardResult {
  CorrelationSet correlations;
  ConvergenceReport report;
};

/// Damped alternation of the rearranged OZ relation (c <- h - c*h) and the
/// HNC closure. Divergence is reported, not thrown.
PicardResult picard_solve(const CorrelationSet& initial, const BondExponent& bond,
                          const ThermalSystem& sys, const PicardOptions& opts = {});

/// How far c deviates from its large-separation form
/// -beta u + w + eta over the outer third of the separation axis.
struct AsymptoteReport {
  double max_residual = 0.0;       // max |c - asymptote| over the outer third
  double max_reference = 0.0;      // max |asymptote| there
  std::vector<double> residual_by_q;  // per outer-third node, max over momenta
  std::vector<double> q_values;
  bool decreasing_trend = false;   // residual envelope decreases outward
};

AsymptoteReport asymptote_check(const CorrelationSet& result, const BondExponent& bond);

}  // namespace qoz
