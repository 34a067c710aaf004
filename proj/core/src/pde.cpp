#include "qoz/pde.hpp"

#include <cmath>
#include <stdexcept>

#include "qoz/numdiff.hpp"

namespace qoz {
namespace {

constexpr Complex kI{0.0, 1.0};

double max_abs(const std::vector<Complex>& f) {
  double m = 0.0;
  for (const Complex& z : f) m = std::max(m, std::abs(z));
  return m;
}

double max_re(const std::vector<Complex>& f) {
  double m = 0.0;
  for (const Complex& z : f) m = std::max(m, std::abs(z.real()));
  return m;
}

bool finite(const std::vector<Complex>& f) {
  for (const Complex& z : f)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

}  // namespace

BetaTrajectory integrate_beta(const std::vector<Complex>& initial, double beta0,
                              double beta_final, int steps, StepMethod method,
                              const RhsFn& rhs, const StepControl& ctrl) {
  if (!(beta0 < beta_final)) throw std::invalid_argument("integrate_beta: beta0 < beta_final");
  if (steps < 1) throw std::invalid_argument("integrate_beta: steps >= 1");

  const double db = (beta_final - beta0) / steps;
  const std::size_t n = initial.size();

  BetaTrajectory traj;
  traj.beta_nodes.push_back(beta0);
  traj.fields.push_back(initial);
  traj.step_beta.push_back(beta0);
  traj.step_max_norm.push_back(max_abs(initial));

  std::vector<Complex> y = initial;
  std::vector<Complex> k1(n), k2(n), k3(n), k4(n), tmp(n);

  for (int s = 0; s < steps; ++s) {
    const double b = beta0 + s * db;
    if (method == StepMethod::euler) {
      rhs(b, y, k1);
      for (std::size_t i = 0; i < n; ++i) y[i] += db * k1[i];
    } else {
      rhs(b, y, k1);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * db * k1[i];
      rhs(b + 0.5 * db, tmp, k2);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * db * k2[i];
      rhs(b + 0.5 * db, tmp, k3);
      for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + db * k3[i];
      rhs(b + db, tmp, k4);
      for (std::size_t i = 0; i < n; ++i)
        y[i] += db / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    const double bnext = beta0 + (s + 1) * db;
    traj.step_beta.push_back(bnext);
    traj.step_max_norm.push_back(max_abs(y));

    if (!finite(y) || max_re(y) > ctrl.blowup_threshold) {
      traj.blowup = true;
      traj.blowup_beta = bnext;
      if (finite(y)) {
        traj.beta_nodes.push_back(bnext);
        traj.fields.push_back(y);
      }
      return traj;
    }
    const bool last = (s + 1 == steps);
    if (last || (ctrl.store_stride > 0 && (s + 1) % ctrl.store_stride == 0)) {
      traj.beta_nodes.push_back(bnext);
      traj.fields.push_back(y);
    }
  }
  return traj;
}

SingletRhs1D::SingletRhs1D(Axis q, std::vector<double> u, double p,
                           const ThermalSystem& sys)
    : q_(q), u_(std::move(u)), p_(p), hbar_(sys.hbar), mass_(sys.mass) {
  if (u_.size() != q_.count) throw std::invalid_argument("SingletRhs1D: grid mismatch");
}

void SingletRhs1D::operator()(double, const std::vector<Complex>& w,
                              std::vector<Complex>& out) const {
  const std::size_t n = q_.count;
  if (w.size() != n) throw std::invalid_argument("SingletRhs1D: field size mismatch");
  out.resize(n);
  std::vector<Complex> dw(n), d2w(n);
  derivative1(std::span<const Complex>(w), q_.spacing, std::span<Complex>(dw));
  derivative2(std::span<const Complex>(w), q_.spacing, std::span<Complex>(d2w));
  const double kin = p_ * p_ / (2.0 * mass_);
  const double half = hbar_ * hbar_ / (2.0 * mass_);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = -kin - u_[i] + kI * hbar_ * p_ / mass_ * dw[i] + half * d2w[i] +
             half * dw[i] * dw[i];
  }
}

PairSpectralRhs::PairSpectralRhs(std::vector<double> u_hat, double p_z, int n,
                                 double extent, const ThermalSystem& sys, bool quadratic)
    : u_hat_(std::move(u_hat)),
      p_z_(p_z),
      n_(n),
      extent_(extent),
      sys_(sys),
      quadratic_(quadratic),
      fft_(Fft::make_2d(n, n)) {
  const std::size_t nn = static_cast<std::size_t>(n_);
  if (u_hat_.size() != nn * nn)
    throw std::invalid_argument("PairSpectralRhs: u_hat size mismatch");
  b_.resize(nn * nn);
  const double dk = 2.0 * kPi / extent_;
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz)
      b_[ix * nn + iz] = b_factor(p_z_, dk * fft_mode(ix, nn), dk * fft_mode(iz, nn), sys_);
}

void PairSpectralRhs::operator()(double, const std::vector<Complex>& w_hat,
                                 std::vector<Complex>& out) {
  const std::size_t total = u_hat_.size();
  if (w_hat.size() != total)
    throw std::invalid_argument("PairSpectralRhs: field size mismatch");
  out.resize(total);
  for (std::size_t i = 0; i < total; ++i) out[i] = -u_hat_[i] + b_[i] * w_hat[i];
  if (quadratic_) {
    const std::vector<Complex> q =
        quadratic_term_spectral(w_hat, n_, extent_, sys_, fft_, true);
    for (std::size_t i = 0; i < total; ++i) out[i] += q[i];
  }
}

void PairWithSingletRhs::operator()(double, const std::vector<Complex>& w2,
                                    std::vector<Complex>& out) const {
  const std::size_t n1 = q1.count, n2 = q2.count;
  if (w2.size() != n1 * n2)
    throw std::invalid_argument("PairWithSingletRhs: slice size mismatch");
  out.assign(n1 * n2, Complex{});

  // derivatives along q1 (rows) and q2 (columns)
  std::vector<Complex> col(n1), dcol(n1), d2col(n1);
  std::vector<Complex> drow(n2), d2row(n2);
  std::vector<Complex> dw_dq1(n1 * n2), d2w_dq1(n1 * n2), dw_dq2(n1 * n2), d2w_dq2(n1 * n2);
  for (std::size_t i = 0; i < n1; ++i) {
    std::span<const Complex> row(w2.data() + i * n2, n2);
    derivative1(row, q2.spacing, std::span<Complex>(drow));
    derivative2(row, q2.spacing, std::span<Complex>(d2row));
    for (std::size_t j = 0; j < n2; ++j) {
      dw_dq2[i * n2 + j] = drow[j];
      d2w_dq2[i * n2 + j] = d2row[j];
    }
  }
  for (std::size_t j = 0; j < n2; ++j) {
    for (std::size_t i = 0; i < n1; ++i) col[i] = w2[i * n2 + j];
    derivative1(std::span<const Complex>(col), q1.spacing, std::span<Complex>(dcol));
    derivative2(std::span<const Complex>(col), q1.spacing, std::span<Complex>(d2col));
    for (std::size_t i = 0; i < n1; ++i) {
      dw_dq1[i * n2 + j] = dcol[i];
      d2w_dq1[i * n2 + j] = d2col[i];
    }
  }

  const double half = hbar * hbar / (2.0 * mass);
  const double full = hbar * hbar / mass;
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t id = i * n2 + j;
      out[id] = -u_pair[id] +
                kI * hbar / mass * (p1 * dw_dq1[id] + p2 * dw_dq2[id]) +
                half * (d2w_dq1[id] + d2w_dq2[id]) +
                half * (dw_dq1[id] * dw_dq1[id] + dw_dq2[id] * dw_dq2[id]) +
                full * (dw1_q1[i] * dw_dq1[id] + dw1_q2[j] * dw_dq2[id]);
    }
}

}  // namespace qoz
