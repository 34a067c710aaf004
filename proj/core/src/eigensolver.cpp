#include "qoz/eigensolver.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace qoz {
namespace {

double trapezoid_norm(const std::vector<double>& f, double h) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double w = (i == 0 || i + 1 == f.size()) ? 0.5 : 1.0;
    s += w * f[i] * f[i];
  }
  return s * h;
}

void normalize(std::vector<double>& f, double h) {
  const double n = std::sqrt(trapezoid_norm(f, h));
  if (n == 0.0) throw std::runtime_error("eigensolver: zero-norm state");
  for (double& v : f) v /= n;
}

}  // namespace

EigenBasis sho_eigenstates(double mass, double hbar, double omega, int n_states,
                           const Axis& grid) {
  if (n_states < 1) throw std::invalid_argument("sho_eigenstates: n_states >= 1");
  const std::size_t n = grid.count;
  const double scale = std::sqrt(mass * omega / hbar);

  EigenBasis basis;
  basis.q = grid;
  basis.mass = mass;
  basis.hbar = hbar;
  basis.boundary = BoundaryKind::vanish_both;
  basis.energies.resize(static_cast<std::size_t>(n_states));
  basis.states.assign(static_cast<std::size_t>(n_states), std::vector<double>(n));

  // normalized Hermite-function recurrence, stable for large l
  std::vector<double> h0(n), h1(n);
  const double norm0 = std::pow(scale * scale / kPi, 0.25);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = scale * grid.coord(i);
    h0[i] = norm0 * std::exp(-0.5 * xi * xi);
    h1[i] = std::sqrt(2.0) * xi * h0[i];
  }
  for (int l = 0; l < n_states; ++l) {
    basis.energies[static_cast<std::size_t>(l)] = hbar * omega * (l + 0.5);
    std::vector<double>& out = basis.states[static_cast<std::size_t>(l)];
    if (l == 0)
      out = h0;
    else if (l == 1)
      out = h1;
    else {
      for (std::size_t i = 0; i < n; ++i) {
        const double xi = scale * grid.coord(i);
        const double next = std::sqrt(2.0 / l) * xi * h1[i] -
                            std::sqrt((l - 1.0) / l) * h0[i];
        h0[i] = h1[i];
        h1[i] = next;
      }
      out = h1;
    }
  }

  // tail check on the highest state
  const std::vector<double>& top = basis.states.back();
  double peak = 0.0;
  for (double v : top) peak = std::max(peak, std::abs(v));
  const double edge = std::max(std::abs(top.front()), std::abs(top.back()));
  if (edge > 1e-12 * peak) {
    std::ostringstream os;
    os << "sho_eigenstates: grid too narrow for state " << (n_states - 1)
       << " (boundary amplitude " << edge << ", peak " << peak << ")";
    throw std::invalid_argument(os.str());
  }

  for (auto& st : basis.states) normalize(st, grid.spacing);
  return basis;
}

std::vector<double> tabulate_potential(const RadialPotential& u, const Axis& axis,
                                       double cap) {
  std::vector<double> out(axis.count);
  for (std::size_t i = 0; i < axis.count; ++i) {
    const double q = axis.coord(i);
    double v;
    if (q == 0.0 && u.diverges_at_origin())
      v = cap;
    else
      v = u.eval(std::abs(q) > 0.0 ? std::abs(q) : q, 0);
    out[i] = std::min(v, cap);
  }
  return out;
}

namespace {

// Dirichlet eigensolve on the interior nodes of `q`; states get zero end
// values. Returns the lowest n_states pairs.
EigenBasis dirichlet_solve(const Axis& q, const std::vector<double>& u, double mass,
                           double hbar, int n_states) {
  const std::size_t n = q.count;
  if (n < 4) throw std::invalid_argument("solve_eigen_1d: need at least 4 nodes");
  const std::size_t ni = n - 2;  // interior
  if (static_cast<std::size_t>(n_states) > ni)
    throw std::invalid_argument("solve_eigen_1d: more states than interior nodes");
  const double h = q.spacing;
  const double t = hbar * hbar / (2.0 * mass * h * h);

  std::vector<double> diag(ni), off(ni - 1);
  for (std::size_t i = 0; i < ni; ++i) diag[i] = 2.0 * t + u[i + 1];
  for (std::size_t i = 0; i + 1 < ni; ++i) off[i] = -t;

  std::vector<double> evals(ni);
  std::vector<double> evecs(ni * static_cast<std::size_t>(n_states));
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n_states));
  lapack_int m = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', static_cast<lapack_int>(ni), diag.data(), off.data(),
      0.0, 0.0, 1, n_states, 0.0, &m, evals.data(), evecs.data(),
      static_cast<lapack_int>(ni), isuppz.data());
  if (info != 0 || m != n_states) {
    std::ostringstream os;
    os << "solve_eigen_1d: dstevr failed (info " << info << ", found " << m << " of "
       << n_states << " states)";
    throw std::runtime_error(os.str());
  }

  EigenBasis basis;
  basis.q = q;
  basis.mass = mass;
  basis.hbar = hbar;
  basis.energies.assign(evals.begin(), evals.begin() + n_states);
  basis.states.assign(static_cast<std::size_t>(n_states), std::vector<double>(n, 0.0));
  for (int l = 0; l < n_states; ++l) {
    std::vector<double>& st = basis.states[static_cast<std::size_t>(l)];
    for (std::size_t i = 0; i < ni; ++i)
      st[i + 1] = evecs[static_cast<std::size_t>(l) * ni + i];
    // sign convention: first interior lobe positive
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (std::abs(st[i]) > 1e-12) {
        if (st[i] < 0.0)
          for (double& v : st) v = -v;
        break;
      }
    }
    normalize(st, h);
  }
  return basis;
}

}  // namespace

EigenBasis solve_eigen_1d(const Axis& q, const std::vector<double>& u, double mass,
                          double hbar, int n_states, BoundaryKind bc) {
  if (u.size() != q.count) throw std::invalid_argument("solve_eigen_1d: grid mismatch");
  if (n_states < 1) throw std::invalid_argument("solve_eigen_1d: n_states >= 1");

  if (bc == BoundaryKind::vanish_both) {
    EigenBasis basis = dirichlet_solve(q, u, mass, hbar, n_states);
    basis.boundary = bc;
    return basis;
  }

  // parity extension: solve on [0, q_max], mirror to [-q_max, q_max]
  if (std::abs(q.origin) > 1e-12 * q.spacing)
    throw std::invalid_argument("solve_eigen_1d: parity extension needs origin 0");
  EigenBasis half = dirichlet_solve(q, u, mass, hbar, n_states);

  const std::size_t nh = q.count;
  const std::size_t nfull = 2 * nh - 1;
  Axis full(-q.upper(), q.spacing, nfull);

  EigenBasis basis;
  basis.q = full;
  basis.mass = mass;
  basis.hbar = hbar;
  basis.boundary = bc;
  basis.energies.reserve(2 * half.size());
  basis.states.reserve(2 * half.size());
  for (std::size_t l = 0; l < half.size(); ++l) {
    for (int parity = 0; parity < 2; ++parity) {  // 0 even, 1 odd
      std::vector<double> st(nfull);
      for (std::size_t i = 0; i < nfull; ++i) {
        const double x = full.coord(i);
        const std::size_t j = static_cast<std::size_t>(
            std::llround(std::abs(x) / q.spacing));
        const double v = half.states[l][std::min(j, nh - 1)];
        st[i] = (parity == 0) ? v : (x < 0.0 ? -v : v);
      }
      normalize(st, full.spacing);
      basis.energies.push_back(half.energies[l]);
      basis.states.push_back(std::move(st));
    }
  }
  return basis;
}

bool CommutationTable::all_valid() const {
  return std::all_of(valid.begin(), valid.end(), [](std::uint8_t v) { return v != 0; });
}

}  // namespace qoz
