#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qoz/eigensolver.hpp"
#include "qoz/threading.hpp"

namespace qoz {
namespace {

constexpr Complex kI{0.0, 1.0};

// phi_l evaluated at an arbitrary point: exact on basis nodes, linear
// interpolation between them.
double state_value(const EigenBasis& basis, std::size_t l, double q) {
  const Axis& ax = basis.q;
  const double t = (q - ax.origin) / ax.spacing;
  if (t < -1e-9 || t > static_cast<double>(ax.count - 1) + 1e-9)
    throw GridBoundsError(0, q, ax);
  const double tr = std::round(t);
  const std::vector<double>& st = basis.states[l];
  if (std::abs(t - tr) < 1e-6) {
    const std::size_t i = static_cast<std::size_t>(std::max(0.0, tr));
    return st[std::min(i, ax.count - 1)];
  }
  const std::size_t i = static_cast<std::size_t>(std::max(0.0, std::floor(t)));
  const std::size_t i1 = std::min(i + 1, ax.count - 1);
  const double f = t - static_cast<double>(i);
  return (1.0 - f) * st[i] + f * st[i1];
}

// T_l(p) = int phi_l(r) e^{+i p r / hbar} dr, trapezoid on the basis grid.
// The integrand decays to zero at both ends, so the trapezoid rule is
// spectrally accurate here.
std::vector<Complex> plane_wave_overlaps(const EigenBasis& basis, const Axis& p_axis) {
  const std::size_t nl = basis.size(), np = p_axis.count, nq = basis.q.count;
  std::vector<Complex> overlaps(nl * np);
  parallel_for(np, [&](std::size_t ip) {
    const double p = symmetric_coord(p_axis, ip);
    std::vector<Complex> wave(nq);
    for (std::size_t i = 0; i < nq; ++i) {
      const double phase = p * basis.q.coord(i) / basis.hbar;
      const double w = (i == 0 || i + 1 == nq) ? 0.5 : 1.0;
      wave[i] = w * Complex(std::cos(phase), std::sin(phase));
    }
    for (std::size_t l = 0; l < nl; ++l) {
      Complex acc{0.0, 0.0};
      const std::vector<double>& st = basis.states[l];
      for (std::size_t i = 0; i < nq; ++i) acc += st[i] * wave[i];
      overlaps[l * np + ip] = acc * basis.q.spacing;
    }
  });
  return overlaps;
}

struct RawTable {
  std::vector<double> log_mod;  // ln |z| + beta E0 subtracted back in
  std::vector<double> theta;    // principal arg of z
  std::vector<std::uint8_t> valid;
};

// z(q,p) = e^{-ipq/hbar} sum_l e^{-beta E_l} phi_l(q) T_l(p), evaluated with
// the ground-state weight factored out to avoid underflow.
RawTable raw_sums(const EigenBasis& basis, double beta, const Axis& q_axis,
                  const Axis& p_axis, const std::vector<Complex>& overlaps) {
  const std::size_t nq = q_axis.count, np = p_axis.count, nl = basis.size();
  const double e0 = basis.energies.front();

  std::vector<double> phi(nq * nl);
  for (std::size_t iq = 0; iq < nq; ++iq)
    for (std::size_t l = 0; l < nl; ++l)
      phi[iq * nl + l] = state_value(basis, l, q_axis.coord(iq));

  std::vector<double> boltz(nl);
  for (std::size_t l = 0; l < nl; ++l) boltz[l] = std::exp(-beta * (basis.energies[l] - e0));

  RawTable raw;
  raw.log_mod.assign(nq * np, 0.0);
  raw.theta.assign(nq * np, 0.0);
  raw.valid.assign(nq * np, 1);
  parallel_for(nq, [&](std::size_t iq) {
    const double q = q_axis.coord(iq);
    for (std::size_t ip = 0; ip < np; ++ip) {
      const double p = symmetric_coord(p_axis, ip);
      Complex s{0.0, 0.0};
      for (std::size_t l = 0; l < nl; ++l)
        s += boltz[l] * phi[iq * nl + l] * overlaps[l * np + ip];
      const double phase = -p * q / basis.hbar;
      const Complex z = s * Complex(std::cos(phase), std::sin(phase));
      const double mod = std::abs(z);
      const std::size_t id = iq * np + ip;
      if (!(mod > 1e-300)) {
        // vanishing kernel (hard core); flag the node and park the value at
        // an extremely suppressed weight instead of an arbitrary branch
        raw.valid[id] = 0;
        raw.log_mod[id] = -1e4;
        continue;
      }
      raw.log_mod[id] = std::log(mod) - beta * e0;
      raw.theta[id] = std::arg(z);
    }
  });
  return raw;
}

double branch_step(double prev, double principal) {
  const double two_pi = 2.0 * kPi;
  return principal + two_pi * std::round((prev - principal) / two_pi);
}

// continuity along the q row nearest p = 0, then along p per column
void axis_unwrap(RawTable& raw, const Axis& q_axis, const Axis& p_axis) {
  const std::size_t nq = q_axis.count, np = p_axis.count;
  std::size_t ip0 = 0;
  for (std::size_t ip = 1; ip < np; ++ip)
    if (std::abs(p_axis.coord(ip)) < std::abs(p_axis.coord(ip0))) ip0 = ip;

  // When the anchor row sits at p = 0 the sum is an integral of the
  // positive heat kernel, so its true branch is the principal one and the
  // row needs no walk. Walking it would let unconverged edge nodes (pure
  // cancellation noise) inject 2 pi k offsets into whole regions.
  if (std::abs(p_axis.coord(ip0)) > 0.5 * p_axis.spacing) {
    std::size_t iq0 = 0;
    double best = -1e308;
    for (std::size_t iq = 0; iq < nq; ++iq)
      if (raw.valid[iq * np + ip0] && raw.log_mod[iq * np + ip0] > best) {
        best = raw.log_mod[iq * np + ip0];
        iq0 = iq;
      }
    auto th = [&](std::size_t iq, std::size_t ip) -> double& {
      return raw.theta[iq * np + ip];
    };
    for (std::size_t iq = iq0 + 1; iq < nq; ++iq)
      th(iq, ip0) = branch_step(th(iq - 1, ip0), th(iq, ip0));
    for (std::size_t iq = iq0; iq-- > 0;)
      th(iq, ip0) = branch_step(th(iq + 1, ip0), th(iq, ip0));
  }

  for (std::size_t iq = 0; iq < nq; ++iq) {
    auto th = [&](std::size_t ip) -> double& { return raw.theta[iq * np + ip]; };
    for (std::size_t ip = ip0 + 1; ip < np; ++ip) th(ip) = branch_step(th(ip - 1), th(ip));
    for (std::size_t ip = ip0; ip-- > 0;) th(ip) = branch_step(th(ip + 1), th(ip));
  }
}

}  // namespace

CommutationTable singlet_w_table(const EigenBasis& basis, double beta, const Axis& q_axis,
                                 const Axis& p_axis, const BranchPolicy& policy,
                                 CommutationTable::Kind kind) {
  if (!(beta > 0.0)) throw std::invalid_argument("singlet_w_table: beta must be > 0");
  const double e0 = basis.energies.front();
  const double tail = std::exp(-beta * (basis.energies.back() - e0));
  double part = 0.0;
  for (double e : basis.energies) part += std::exp(-beta * (e - e0));
  if (tail / part > 1e-10)
    throw std::invalid_argument(
        "singlet_w_table: eigensum not converged; last state carries " +
        std::to_string(tail / part) + " of the partition sum");

  const std::vector<Complex> overlaps = plane_wave_overlaps(basis, p_axis);
  const std::size_t nq = q_axis.count, np = p_axis.count;

  CommutationTable table;
  table.kind = kind;
  table.beta = beta;
  table.lmax = static_cast<int>(basis.size());
  table.grid = ComplexGrid::zeros({q_axis, p_axis});

  if (policy.mode == BranchPolicy::Mode::axis_unwrap) {
    RawTable raw = raw_sums(basis, beta, q_axis, p_axis, overlaps);
    axis_unwrap(raw, q_axis, p_axis);
    table.valid = raw.valid;
    for (std::size_t id = 0; id < nq * np; ++id)
      table.grid.data()[id] = Complex(raw.log_mod[id], raw.theta[id]);
    return table;
  }

  // beta ladder: halve down from beta, fix each node's branch by continuity.
  // The phase grows roughly quadratically in beta, so the branch choice is
  // guided by quadratic extrapolation of the previous rungs; a plain
  // closest-branch rule would fail across the coarse final halvings.
  const int steps = std::max(policy.ladder_steps, 2);
  std::vector<double> betas(static_cast<std::size_t>(steps));
  for (int j = 0; j < steps; ++j)
    betas[static_cast<std::size_t>(j)] = beta * std::pow(0.5, steps - 1 - j);

  std::vector<std::vector<double>> theta_hist;
  RawTable raw;
  for (int j = 0; j < steps; ++j) {
    const double bj = betas[static_cast<std::size_t>(j)];
    raw = raw_sums(basis, bj, q_axis, p_axis, overlaps);
    if (j == 0) {
      theta_hist.push_back(raw.theta);  // principal branch valid near beta = 0
      continue;
    }
    const std::vector<double>& t1 = theta_hist.back();
    for (std::size_t id = 0; id < nq * np; ++id) {
      double predicted;
      if (j == 1) {
        const double r = bj / betas[0];
        predicted = t1[id] * r * r;
      } else {
        const double b0 = betas[static_cast<std::size_t>(j - 2)];
        const double b1 = betas[static_cast<std::size_t>(j - 1)];
        const double t0v = theta_hist[theta_hist.size() - 2][id];
        const double t1v = t1[id];
        // Lagrange through (0,0), (b0,t0), (b1,t1) evaluated at bj
        predicted = t0v * (bj * (bj - b1)) / (b0 * (b0 - b1)) +
                    t1v * (bj * (bj - b0)) / (b1 * (b1 - b0));
      }
      raw.theta[id] = branch_step(predicted, raw.theta[id]);
    }
    theta_hist.push_back(raw.theta);
    if (theta_hist.size() > 2) theta_hist.erase(theta_hist.begin());
  }
  table.valid = raw.valid;
  for (std::size_t id = 0; id < nq * np; ++id)
    table.grid.data()[id] = Complex(raw.log_mod[id], raw.theta[id]);
  return table;
}

Complex PairWTable::w2(double q1, double p1, double q2, double p2) const {
  const double X = 0.5 * (q1 + q2), P = p1 + p2;
  const double x = q1 - q2, pr = 0.5 * (p1 - p2);
  return com.value(X, P) + interaction.value(x, pr) - singlet.value(q1, p1) -
         singlet.value(q2, p2);
}

PairWTable pair_w_table(const EigenBasis& com_basis, const EigenBasis& interaction_basis,
                        const CommutationTable& singlet, double beta, const Axis& com_q,
                        const Axis& com_p, const Axis& int_q, const Axis& int_p,
                        const BranchPolicy& policy) {
  PairWTable t{
      singlet_w_table(com_basis, beta, com_q, com_p, policy,
                      CommutationTable::Kind::com_mode),
      singlet_w_table(interaction_basis, beta, int_q, int_p, policy,
                      CommutationTable::Kind::interaction_mode),
      singlet};
  return t;
}

Complex table_phase_space_trace(const CommutationTable& table, double hbar) {
  const Axis& q = table.grid.axis(0);
  const Axis& p = table.grid.axis(1);
  Complex acc{0.0, 0.0};
  for (std::size_t iq = 0; iq < q.count; ++iq) {
    const double wq = (iq == 0 || iq + 1 == q.count) ? 0.5 : 1.0;
    for (std::size_t ip = 0; ip < p.count; ++ip) {
      const double wp = (ip == 0 || ip + 1 == p.count) ? 0.5 : 1.0;
      acc += wq * wp * std::exp(table.grid.at2(iq, ip));
    }
  }
  return acc * (q.spacing * p.spacing / (2.0 * kPi * hbar));
}

}  // namespace qoz
