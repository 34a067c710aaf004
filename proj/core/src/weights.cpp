#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "qoz/eigensolver.hpp"
#include "qoz/hamiltonian.hpp"

namespace qoz {
namespace {

[[noreturn]] void rethrow_with_particles(const GridBoundsError& e, std::size_t j,
                                         std::ptrdiff_t k) {
  std::ostringstream os;
  os << "assemble_weight: configuration outside tables at particle " << j;
  if (k >= 0) os << " (pair with particle " << k << ")";
  os << ": " << e.what();
  throw std::out_of_range(os.str());
}

}  // namespace

WeightAssembly assemble_weight(const Configuration& config,
                               const CommutationTable& singlet, const PairWTable* pair) {
  const std::size_t n = config.size();
  WeightAssembly out;
  for (std::size_t j = 0; j < n; ++j) {
    try {
      out.w_tilde += singlet.value(config.positions[j][0], config.momenta[j][0]);
    } catch (const GridBoundsError& e) {
      rethrow_with_particles(e, j, -1);
    }
  }
  if (n > 1) {
    if (!pair) throw std::invalid_argument("assemble_weight: N > 1 needs a pair table");
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        try {
          out.w_tilde += pair->w2(config.positions[j][0], config.momenta[j][0],
                                  config.positions[k][0], config.momenta[k][0]);
        } catch (const GridBoundsError& e) {
          rethrow_with_particles(e, j, static_cast<std::ptrdiff_t>(k));
        }
      }
  }
  out.omega = std::exp(out.w_tilde);
  return out;
}

N3Decomposition n3_gradient_decomposition(const Configuration& config,
                                          const PairWTable& pair, double fd_step) {
  if (config.size() != 3)
    throw std::invalid_argument("n3_gradient_decomposition: exactly three particles");
  const double d = fd_step;

  // g[j][k] = d/dq_j w2(j;k), central differences on the assembled tables
  Complex g[3][3];
  for (std::size_t j = 0; j < 3; ++j)
    for (std::size_t k = 0; k < 3; ++k) {
      if (j == k) continue;
      const double qj = config.positions[j][0], pj = config.momenta[j][0];
      const double qk = config.positions[k][0], pk = config.momenta[k][0];
      g[j][k] = (pair.w2(qj + d, pj, qk, pk) - pair.w2(qj - d, pj, qk, pk)) / (2.0 * d);
    }

  N3Decomposition out;
  // printed row order: (1;12),(1;13),(2;21),(2;23),(3;31),(3;32)
  out.squares = {g[0][1] * g[0][1], g[0][2] * g[0][2], g[1][0] * g[1][0],
                 g[1][2] * g[1][2], g[2][0] * g[2][0], g[2][1] * g[2][1]};
  out.crosses = {2.0 * g[0][1] * g[0][2], 2.0 * g[1][0] * g[1][2],
                 2.0 * g[2][0] * g[2][1]};
  out.full_sum = Complex{};
  for (const Complex& s : out.squares) out.full_sum += s;
  for (const Complex& c : out.crosses) out.full_sum += c;
  out.direct_sum = Complex{};
  for (std::size_t j = 0; j < 3; ++j) {
    Complex grad{};
    for (std::size_t k = 0; k < 3; ++k)
      if (k != j) grad += g[j][k];
    out.direct_sum += grad * grad;
  }

  // identify the chain: middle particle by position
  std::array<std::size_t, 3> order{0, 1, 2};
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return config.positions[a][0] < config.positions[b][0];
  });
  const std::size_t lo = order[0], mid = order[1], hi = order[2];
  out.neglected_cross = 2.0 * g[mid][lo] * g[mid][hi];
  const double retained = std::abs(g[lo][mid] * g[lo][mid]) +
                          std::abs(g[mid][lo] * g[mid][lo]) +
                          std::abs(g[mid][hi] * g[mid][hi]) +
                          std::abs(g[hi][mid] * g[hi][mid]);
  out.neglected_ratio = retained > 0.0 ? std::abs(out.neglected_cross) / retained : 0.0;
  return out;
}

namespace {

int default_state_count(double beta_hbar_omega) {
  // enough for the partition tail and for completeness at the default
  // momentum window beta p^2/2m <= 30
  return static_cast<int>(std::ceil(34.5 / beta_hbar_omega)) + 10;
}

// grid wide and fine enough for the highest oscillator state
Axis oscillator_axis(double mass, double hbar, double omega, int n_states,
                     std::size_t min_nodes) {
  const double ell = std::sqrt(hbar / (mass * omega));
  const double turn = std::sqrt(2.0 * n_states + 1.0) * ell;
  const double half = 1.35 * turn + 2.0 * ell;
  const double min_wavelength = 2.0 * kPi * ell / std::sqrt(2.0 * n_states + 1.0);
  const std::size_t by_resolution =
      static_cast<std::size_t>(std::ceil(2.0 * half / (min_wavelength / 10.0)));
  std::size_t n = std::max(min_nodes, by_resolution);
  if (n % 2 == 0) ++n;
  return Axis::symmetric(half, n);
}

// every `stride`-th node of `basis_axis` inside [-half, half]
Axis strided_window(const Axis& basis_axis, double half, std::size_t stride) {
  const double lo = std::max(-half, basis_axis.origin);
  std::size_t i0 = static_cast<std::size_t>(std::ceil((lo - basis_axis.origin) / basis_axis.spacing - 1e-9));
  std::size_t count = 0;
  for (std::size_t i = i0; i < basis_axis.count; i += stride) {
    if (basis_axis.coord(i) > half + 1e-12) break;
    ++count;
  }
  if (count < 2) throw std::invalid_argument("strided_window: window too narrow");
  return Axis(basis_axis.coord(i0), basis_axis.spacing * static_cast<double>(stride), count);
}

}  // namespace

CommutationTable build_singlet_table(const PairTableConfig& cfg) {
  const ThermalSystem& sys = cfg.sys;
  const double bho = sys.beta * sys.hbar * cfg.omega;
  const int n_states =
      cfg.n_trap_states > 0 ? cfg.n_trap_states : default_state_count(bho);

  const Axis basis_axis =
      oscillator_axis(sys.mass, sys.hbar, cfg.omega, n_states, cfg.n_singlet_nodes);
  const EigenBasis basis =
      sho_eigenstates(sys.mass, sys.hbar, cfg.omega, n_states, basis_axis);

  double half = cfg.singlet_halfwidth;
  if (half <= 0.0) {
    // cover beta*u ~ 40 plus the widest scan window
    half = std::sqrt(80.0 / (sys.beta * sys.mass * cfg.omega * cfg.omega));
    half = std::max(half, 3.3);
    half = std::min(half, basis_axis.upper() * 0.98);
  }
  const Axis q_axis = strided_window(basis_axis, half, cfg.table_q_stride);

  double p_max = cfg.p_max_singlet;
  if (p_max <= 0.0) p_max = std::sqrt(60.0 * sys.mass / sys.beta);
  const Axis p_axis = Axis::symmetric(p_max, cfg.n_p_nodes | 1);

  return singlet_w_table(basis, sys.beta, q_axis, p_axis);
}

PairTableSet build_pair_tables(const PairTableConfig& cfg) {
  if (!(cfg.lj_eps > 0.0))
    throw std::invalid_argument(
        "build_pair_tables: lj_eps must be set explicitly (no default well depth)");
  const ThermalSystem& sys = cfg.sys;
  const double bho = sys.beta * sys.hbar * cfg.omega;

  PairTableSet set;
  set.singlet = build_singlet_table(cfg);

  // center of mass: oscillator of mass 2m at the trap frequency
  const double m_com = 2.0 * sys.mass;
  const int com_states =
      cfg.n_trap_states > 0 ? cfg.n_trap_states : default_state_count(bho);
  const Axis com_basis_axis =
      oscillator_axis(m_com, sys.hbar, cfg.omega, com_states, cfg.n_singlet_nodes);
  const EigenBasis com_basis =
      sho_eigenstates(m_com, sys.hbar, cfg.omega, com_states, com_basis_axis);

  double com_half = std::sqrt(80.0 / (sys.beta * m_com * cfg.omega * cfg.omega));
  com_half = std::max(com_half, 2.4);
  com_half = std::min(com_half, com_basis_axis.upper() * 0.98);
  const Axis com_q = strided_window(com_basis_axis, com_half, cfg.table_q_stride);
  double p_max_com = cfg.p_max_com;
  if (p_max_com <= 0.0) p_max_com = std::sqrt(60.0 * m_com / sys.beta);
  const Axis com_p = Axis::symmetric(p_max_com, cfg.n_p_nodes | 1);

  // interaction coordinate: reduced mass m/2, trap + capped LJ core,
  // hard-wall at x = 0 with even/odd extension
  const double m_int = 0.5 * sys.mass;
  const Axis half_axis(0.0, cfg.q_max_interaction / double(cfg.n_interaction_nodes - 1),
                       cfg.n_interaction_nodes);
  const LennardJones lj(cfg.lj_eps, cfg.lj_sigma);
  const Harmonic trap_int(m_int, cfg.omega);
  std::vector<double> u_int(half_axis.count);
  {
    const std::vector<double> ulj = tabulate_potential(lj, half_axis, cfg.core_cap);
    for (std::size_t i = 0; i < half_axis.count; ++i)
      u_int[i] = ulj[i] + trap_int.eval(half_axis.coord(i), 0);
  }
  const EigenBasis int_basis =
      solve_eigen_1d(half_axis, u_int, m_int, sys.hbar, cfg.n_interaction_states,
                     BoundaryKind::lj_core_vanish_with_parity_extension);

  const double int_half = cfg.q_max_interaction * 0.95;
  const Axis int_q = strided_window(int_basis.q, int_half, 1);
  double p_max_int = cfg.p_max_interaction;
  if (p_max_int <= 0.0) p_max_int = std::sqrt(60.0 * m_int / sys.beta);
  const Axis int_p = Axis::symmetric(p_max_int, cfg.n_p_nodes | 1);

  set.pair = pair_w_table(com_basis, int_basis, set.singlet, sys.beta, com_q, com_p,
                          int_q, int_p);
  return set;
}

WeightScan three_particle_weight_scan(const PairTableSet& tables,
                                      const PotentialModel& model,
                                      const ThermalSystem& sys, const ScanConfig& scan) {
  WeightScan out;
  out.p2 = scan.p2_values;
  out.q2.resize(scan.q2_axis.count);
  for (std::size_t i = 0; i < scan.q2_axis.count; ++i) out.q2[i] = scan.q2_axis.coord(i);

  const std::size_t np = out.p2.size(), nq = out.q2.size();
  out.re_w_tilde.assign(np, std::vector<double>(nq));
  out.im_w_tilde.assign(np, std::vector<double>(nq));
  out.classical.assign(np, std::vector<double>(nq));
  out.re_omega.assign(np, std::vector<double>(nq));

  double max_re = -1e308;
  for (std::size_t ip = 0; ip < np; ++ip) {
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const Configuration config({Vec(scan.q1), Vec(out.q2[iq]), Vec(scan.q3)},
                                 {Vec(scan.p1), Vec(out.p2[ip]), Vec(scan.p3)});
      const WeightAssembly w = assemble_weight(config, tables.singlet, &tables.pair);
      out.re_w_tilde[ip][iq] = w.w_tilde.real();
      out.im_w_tilde[ip][iq] = w.w_tilde.imag();
      out.classical[ip][iq] = -sys.beta * classical_hamiltonian(config, model, sys).value;
      max_re = std::max(max_re, w.w_tilde.real());
    }
  }
  out.omega_shift = max_re;
  for (std::size_t ip = 0; ip < np; ++ip)
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const Complex w(out.re_w_tilde[ip][iq] - out.omega_shift, out.im_w_tilde[ip][iq]);
      out.re_omega[ip][iq] = std::exp(w).real();
    }
  return out;
}

}  // namespace qoz
