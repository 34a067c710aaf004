#pragma once

#include <functional>
#include <vector>

#include "qoz/fft.hpp"
#include "qoz/grid.hpp"
#include "qoz/linear_fourier.hpp"
#include "qoz/potentials.hpp"
#include "qoz/types.hpp"

namespace qoz {

enum class StepMethod { euler, rk4 };

struct StepControl {
  /// Integration halts (flagged, not thrown) once max |Re field| exceeds
  /// this; e^50 is far beyond any physical weight.
  double blowup_threshold = 50.0;
  /// Record every k-th node (plus the endpoints) in the trajectory.
  std::size_t store_stride = 1;
};

/// Fields along an inverse-temperature integration, plus per-step
/// diagnostics. On blowup the trajectory holds everything up to the last
/// finite node and `blowup` is set.
struct BetaTrajectory {
  std::vector<double> beta_nodes;
  std::vector<std::vector<Complex>> fields;
  std::vector<double> step_beta;      // every step, diagnostics below align
  std::vector<double> step_max_norm;  // max |field|
  bool blowup = false;
  double blowup_beta = 0.0;

  const std::vector<Complex>& final_field() const { return fields.back(); }
  double final_beta() const { return beta_nodes.back(); }
};

using RhsFn =
    std::function<void(double beta, const std::vector<Complex>&, std::vector<Complex>&)>;

/// Fixed-step integration of d(field)/d(beta) = rhs from beta0 to beta_final.
BetaTrajectory integrate_beta(const std::vector<Complex>& initial, double beta0,
                              double beta_final, int steps, StepMethod method,
                              const RhsFn& rhs, const StepControl& ctrl = {});

/// Right hand side of the one-particle equation on a 1D grid:
///   -p^2/2m - u(q) + (i hbar p / m) w' + (hbar^2/2m) w'' + (hbar^2/2m) (w')^2
/// Central differences, one-sided at the boundary nodes.
class SingletRhs1D {
 public:
  SingletRhs1D(Axis q, std::vector<double> u, double p, const ThermalSystem& sys);
  void operator()(double beta, const std::vector<Complex>& w,
                  std::vector<Complex>& out) const;
  const Axis& axis() const { return q_; }

 private:
  Axis q_;
  std::vector<double> u_;
  double p_;
  double hbar_, mass_;
};

/// Right hand side of the transformed pair equation on one momentum slice:
///   -u_hat + b w_hat + quadratic convolution (2/3-rule dealiased FFT).
/// The quadratic term can be disabled to recover the exactly linear system.
class PairSpectralRhs {
 public:
  PairSpectralRhs(std::vector<double> u_hat, double p_z, int n, double extent,
                  const ThermalSystem& sys, bool quadratic = true);
  void operator()(double beta, const std::vector<Complex>& w_hat,
                  std::vector<Complex>& out);

 private:
  std::vector<double> u_hat_;
  double p_z_;
  int n_;
  double extent_;
  ThermalSystem sys_;
  bool quadratic_;
  std::vector<double> b_;  // precomputed drift factors
  Fft fft_;
};

/// Right hand side of the two-particle equation with an external singlet
/// potential, assembled on a (q1, q2) slice at fixed (p1, p2). Singlet
/// gradient profiles dw1(q) are per-particle 1D tables on the same axes.
/// The momentum advection carries i hbar / m, matching the homogeneous pair
/// reduction; see rhs consistency tests.
struct PairWithSingletRhs {
  Axis q1, q2;
  std::vector<double> u_pair;        // u2(|q1-q2|) on the slice, row-major
  std::vector<Complex> dw1_q1;       // d/dq w1 at (q1, p1), per q1 node
  std::vector<Complex> dw1_q2;       // d/dq w1 at (q2, p2), per q2 node
  double p1 = 0.0, p2 = 0.0;
  double hbar = 1.0, mass = 1.0;

  void operator()(double beta, const std::vector<Complex>& w2,
                  std::vector<Complex>& out) const;
};

}  // namespace qoz
