#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qoz/grid.hpp"
#include "qoz/potentials.hpp"
#include "qoz/types.hpp"

namespace qoz {

enum class BoundaryKind {
  /// Wavefunction pinned to zero at both grid ends.
  vanish_both,
  /// Hard-core interaction coordinate: states vanish at q = 0 and q_max,
  /// then get even and odd extensions to negative q at the same energy.
  lj_core_vanish_with_parity_extension,
};

/// Energies and real wavefunctions of a 1D Hamiltonian, orthonormal under
/// trapezoid quadrature on the stored axis.
struct EigenBasis {
  Axis q;
  std::vector<double> energies;
  std::vector<std::vector<double>> states;  // states[l][node]
  BoundaryKind boundary = BoundaryKind::vanish_both;
  double mass = 1.0;
  double hbar = 1.0;

  std::size_t size() const { return energies.size(); }
};

/// Analytic harmonic-oscillator eigenstates, E_l = hbar omega (l + 1/2).
/// Throws if the grid cannot hold the tail of the highest state.
EigenBasis sho_eigenstates(double mass, double hbar, double omega, int n_states,
                           const Axis& grid);

/// Lowest eigenpairs of (-hbar^2/2m) d^2/dq^2 + u(q) by symmetric
/// tridiagonal diagonalization of the central-difference Hamiltonian.
/// With the parity-extension boundary the axis must start at q = 0 and the
/// result carries 2*n_states states on the symmetric extended axis.
EigenBasis solve_eigen_1d(const Axis& q, const std::vector<double>& u, double mass,
                          double hbar, int n_states, BoundaryKind bc);

/// u on axis nodes, clamped to `cap`; a diverging origin node takes the cap.
std::vector<double> tabulate_potential(const RadialPotential& u, const Axis& axis,
                                       double cap);

/// How the complex-log branch of ln(sum) is fixed across the table.
struct BranchPolicy {
  enum class Mode {
    /// Continuity along the q row nearest p = 0, then along p per column.
    axis_unwrap,
    /// Continuity in beta along a geometric ladder from near zero, node by
    /// node; slower, robust when a single table is strongly wound.
    beta_ladder,
  };
  Mode mode = Mode::axis_unwrap;
  int ladder_steps = 8;
};

/// Combined commutation function w on a (q, p) grid, built from an
/// eigenstate sum. Stored values satisfy w -> -beta H as beta -> 0 and
/// w(q,-p) = w(q,p)*.
struct CommutationTable {
  enum class Kind { singlet, com_mode, interaction_mode };
  Kind kind = Kind::singlet;
  double beta = 0.0;
  int lmax = 0;
  ComplexGrid grid;             // axis 0 = q, axis 1 = p
  std::vector<std::uint8_t> valid;  // per node; 0 where the sum underflowed

  bool all_valid() const;
  Complex value(double q, double p) const { return grid.interpolate(std::array{q, p}); }
};

CommutationTable singlet_w_table(const EigenBasis& basis, double beta, const Axis& q_axis,
                                 const Axis& p_axis, const BranchPolicy& policy = {},
                                 CommutationTable::Kind kind = CommutationTable::Kind::singlet);

/// Two-particle table in center-of-mass / interaction coordinates. The full
/// pair function is evaluated per phase point as
///   w2(1;2) = w_com(X,P) + w_int(x,p_rel) - w1(q1,p1) - w1(q2,p2)
/// with X = (q1+q2)/2, P = p1+p2, x = q1-q2, p_rel = (p1-p2)/2.
struct PairWTable {
  CommutationTable com;
  CommutationTable interaction;
  CommutationTable singlet;

  Complex w2(double q1, double p1, double q2, double p2) const;
};

PairWTable pair_w_table(const EigenBasis& com_basis, const EigenBasis& interaction_basis,
                        const CommutationTable& singlet, double beta, const Axis& com_q,
                        const Axis& com_p, const Axis& int_q, const Axis& int_p,
                        const BranchPolicy& policy = {});

/// Trapezoid phase-space trace (1/2 pi hbar) int dq dp e^{w(q,p)} of a
/// singlet table; equals the partition sum of the basis when the table
/// covers the thermally relevant region.
Complex table_phase_space_trace(const CommutationTable& table, double hbar);

// ----------------------------------------------------------------- weights

struct WeightAssembly {
  Complex w_tilde{0.0, 0.0};  // sum of singlet and pair contributions
  Complex omega{0.0, 0.0};    // exp(w_tilde)
};

/// Interpolated N-particle weight for a 1D configuration. Throws
/// GridBoundsError-derived errors naming the offending particle when a
/// coordinate leaves the tables.
WeightAssembly assemble_weight(const Configuration& config,
                               const CommutationTable& singlet,
                               const PairWTable* pair);

/// Every term of the three-particle expansion of grad W . grad W evaluated
/// from pair-table gradients (central differences with step fd_step).
struct N3Decomposition {
  // squares [j][k] of grad_j w_jk for the three bonds as printed rows:
  // (1;12),(1;13),(2;21),(2;23),(3;31),(3;32)
  std::array<Complex, 6> squares;
  // doubled cross terms at each particle: 2 grad_j w_ja . grad_j w_jb
  std::array<Complex, 3> crosses;  // at particles 1, 2, 3
  Complex full_sum;                // all nine terms
  Complex direct_sum;              // sum_j |grad_j W|^2 from summed bond gradients
  Complex neglected_cross;         // 2 grad_2 w_21 . grad_2 w_23
  double neglected_ratio = 0.0;    // |neglected| / sum of |retained squares|
};

N3Decomposition n3_gradient_decomposition(const Configuration& config,
                                          const PairWTable& pair, double fd_step);

// ------------------------------------------------- bundled table construction

/// Everything needed to build the trap + pair tables of the 1D test system
/// in one call. Masses: singlet m, center of mass 2m, interaction m/2.
struct PairTableConfig {
  ThermalSystem sys{1.0, 1.0, 1.0, 1};
  double omega = 3.51122;    // trap frequency in reduced units (hbar=m=r_e=1)
  double lj_eps = 0.0;       // no silent default; callers must set > 0 to get a pair part
  double lj_sigma = 0.8908987181403393;  // 2^(-1/6), i.e. r_e = 1
  double core_cap = 1e6;     // clamp on the diverging LJ core

  double q_max_interaction = 4.0;
  std::size_t n_interaction_nodes = 1200;
  int n_interaction_states = 48;  // per parity

  double singlet_halfwidth = 0.0;  // 0: derived from beta and omega
  std::size_t n_singlet_nodes = 1601;
  int n_trap_states = 0;  // 0: derived from beta

  double p_max_singlet = 0.0;  // 0: beta p^2/2m = 30
  double p_max_com = 0.0;
  double p_max_interaction = 0.0;
  std::size_t n_p_nodes = 121;     // per momentum axis, odd
  std::size_t table_q_stride = 4;  // table q nodes = every k-th basis node
};

struct PairTableSet {
  CommutationTable singlet;
  PairWTable pair;
};

PairTableSet build_pair_tables(const PairTableConfig& cfg);

/// Build just the singlet trap table (no pair potential) with the same
/// defaulting rules.
CommutationTable build_singlet_table(const PairTableConfig& cfg);

// ------------------------------------------------------------- profile scans

/// Re W-tilde of three particles on a line versus the middle particle's
/// phase-space coordinates, against the classical exponent -beta H.
/// Outer particles are pinned at (q1,p1), (q3,p3).
struct WeightScan {
  std::vector<double> q2;
  std::vector<double> p2;
  // [p2][q2]
  std::vector<std::vector<double>> re_w_tilde;
  std::vector<std::vector<double>> im_w_tilde;
  std::vector<std::vector<double>> classical;   // -beta H
  std::vector<std::vector<double>> re_omega;    // Re exp(w_tilde - shift)
  double omega_shift = 0.0;  // max Re w_tilde over the scan
};

struct ScanConfig {
  double q1, p1, q3, p3;
  std::vector<double> p2_values;
  Axis q2_axis;
};

WeightScan three_particle_weight_scan(const PairTableSet& tables,
                                      const PotentialModel& model,
                                      const ThermalSystem& sys, const ScanConfig& scan);

}  // namespace qoz
