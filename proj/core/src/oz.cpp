#include "qoz/oz.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qoz/threading.hpp"

namespace qoz {
namespace {

constexpr double kExpFloor = -700.0;  // below this exp underflows anyway

Complex safe_exp(const Complex& z) {
  if (z.real() < kExpFloor || std::isinf(z.real())) {
    if (z.real() < 0.0) return Complex{0.0, 0.0};
  }
  return std::exp(z);
}

double trap_weight(std::size_t i, std::size_t n) {
  return (i == 0 || i + 1 == n) ? 0.5 : 1.0;
}

}  // namespace

Complex BondExponent::exponent(std::size_t iq, std::size_t ip1, std::size_t ip2) const {
  Complex e{-beta_u[iq], 0.0};
  const std::size_t id = axes.idx(iq, ip1, ip2);
  if (!w2.empty()) e += w2[id];
  if (!eta2.empty()) e += eta2[id];
  return e;
}

std::vector<double> rho1_maxwell(double n, const Axis& p_axis, const ThermalSystem& sys) {
  std::vector<double> rho(p_axis.count);
  const double norm = std::sqrt(2.0 * kPi * sys.mass / sys.beta);
  for (std::size_t i = 0; i < p_axis.count; ++i) {
    const double p = p_axis.coord(i);
    rho[i] = 2.0 * kPi * sys.hbar * n *
             std::exp(-sys.beta * p * p / (2.0 * sys.mass)) / norm;
  }
  return rho;
}

std::vector<Complex> w2_linear_1d(const RadialPotential& pair, const PhaseAxes& axes,
                                  const ThermalSystem& sys,
                                  const std::optional<FourierRegularization>& reg) {
  // separation-space table per relative momentum via a dense transform grid
  const double L = 2.0 * std::max(std::abs(axes.q.origin), std::abs(axes.q.upper())) * 2.0;
  const int n_k = 1024;
  const double dk = 2.0 * kPi / L;

  std::vector<double> kv(static_cast<std::size_t>(n_k));
  for (int i = 0; i < n_k; ++i) kv[static_cast<std::size_t>(i)] = dk * fft_mode(
      static_cast<std::size_t>(i), static_cast<std::size_t>(n_k));
  std::vector<double> u_hat = pair_potential_ft_radial_1d(pair, kv, reg);

  std::vector<Complex> out(axes.field_size());
  const std::size_t np = axes.p.count, nq = axes.q.count;
  parallel_for(np * np, [&](std::size_t pp) {
    const std::size_t ip1 = pp / np, ip2 = pp % np;
    const double p_rel = symmetric_coord(axes.p, ip1) - symmetric_coord(axes.p, ip2);
    // w(q) = (1/2pi) sum_k e^{ikq} w_hat(k) dk
    for (std::size_t iq = 0; iq < nq; ++iq) {
      const double q = symmetric_coord(axes.q, iq);
      Complex acc{};
      for (int i = 0; i < n_k; ++i) {
        const double k = kv[static_cast<std::size_t>(i)];
        const double b = -sys.hbar * p_rel * k / sys.mass -
                         sys.hbar * sys.hbar * k * k / sys.mass;
        const Complex wk = linear_solution_value(u_hat[static_cast<std::size_t>(i)], b,
                                                 sys.beta);
        acc += wk * Complex(std::cos(k * q), std::sin(k * q));
      }
      out[axes.idx(iq, ip1, ip2)] = acc * (dk / (2.0 * kPi));
    }
  });
  return out;
}

std::vector<Complex> eta2_dimer_field(const PhaseAxes& axes, const ThermalSystem& sys,
                                      Statistics stats, double damping_scale) {
  std::vector<Complex> out(axes.field_size());
  for (std::size_t iq = 0; iq < axes.q.count; ++iq) {
    const double q = symmetric_coord(axes.q, iq);
    const double damp =
        damping_scale > 0.0 ? std::exp(-(q * q) / (damping_scale * damping_scale)) : 1.0;
    for (std::size_t ip1 = 0; ip1 < axes.p.count; ++ip1)
      for (std::size_t ip2 = 0; ip2 < axes.p.count; ++ip2) {
        const Vec p_rel(symmetric_coord(axes.p, ip1) - symmetric_coord(axes.p, ip2));
        out[axes.idx(iq, ip1, ip2)] = damp * dimer_eta(p_rel, Vec(q), sys, stats);
      }
  }
  return out;
}

MayerField mayer_f(const BondExponent& bond, const Axis& p_rel_axis) {
  MayerField out;
  out.p = p_rel_axis;
  out.q = bond.axes.q;
  out.f.assign(p_rel_axis.count * bond.axes.q.count, Complex{});

  // evaluate at p1 = p/2, p2 = -p/2 by locating the nearest solver momenta
  const Axis& pax = bond.axes.p;
  auto nearest = [&](double p) {
    const double t = (p - pax.origin) / pax.spacing;
    const std::ptrdiff_t i = std::llround(t);
    if (i < 0 || i >= static_cast<std::ptrdiff_t>(pax.count))
      throw GridBoundsError(1, p, pax);
    if (std::abs(t - static_cast<double>(i)) > 1e-6)
      throw std::invalid_argument("mayer_f: p_rel/2 must lie on the solver momentum axis");
    return static_cast<std::size_t>(i);
  };

  for (std::size_t ip = 0; ip < p_rel_axis.count; ++ip) {
    const double p_rel = p_rel_axis.coord(ip);
    const std::size_t ip1 = nearest(0.5 * p_rel), ip2 = nearest(-0.5 * p_rel);
    for (std::size_t iq = 0; iq < bond.axes.q.count; ++iq)
      out.at(ip, iq) = safe_exp(bond.exponent(iq, ip1, ip2)) - 1.0;
  }
  return out;
}

std::vector<Complex> oz_convolve(const std::vector<Complex>& c,
                                 const std::vector<Complex>& h,
                                 const std::vector<double>& rho1, const PhaseAxes& axes,
                                 const ThermalSystem& sys) {
  const std::size_t nq = axes.q.count, np = axes.p.count;
  if (c.size() != axes.field_size() || h.size() != axes.field_size() ||
      rho1.size() != np)
    throw std::invalid_argument("oz_convolve: field sizes do not match the axes");

  const double measure = axes.q.spacing * axes.p.spacing / (2.0 * kPi * sys.hbar);
  std::vector<Complex> out(axes.field_size());

  // q3 integral: c(q1-q3) h(q3-q2); with s = q1-q2 the target separation and
  // t = q1-q3 the integration variable, the integrand is c(t) h(s-t) with
  // both fields zero outside the stored axis.
  parallel_for(nq, [&](std::size_t is) {
    const double s = axes.q.coord(is);
    for (std::size_t ip1 = 0; ip1 < np; ++ip1)
      for (std::size_t ip2 = 0; ip2 < np; ++ip2) {
        Complex acc{};
        for (std::size_t it = 0; it < nq; ++it) {
          const double t = axes.q.coord(it);
          const double u = s - t;  // argument of h
          const double iu_f = (u - axes.q.origin) / axes.q.spacing;
          const std::ptrdiff_t iu = std::llround(iu_f);
          if (iu < 0 || iu >= static_cast<std::ptrdiff_t>(nq)) continue;
          const double wq = trap_weight(it, nq);
          for (std::size_t ip3 = 0; ip3 < np; ++ip3) {
            const double wp = trap_weight(ip3, np);
            acc += wq * wp * rho1[ip3] * c[axes.idx(it, ip1, ip3)] *
                   h[axes.idx(static_cast<std::size_t>(iu), ip3, ip2)];
          }
        }
        out[axes.idx(is, ip1, ip2)] = acc * measure;
      }
  });
  return out;
}

std::vector<Complex> hnc_closure(const std::vector<Complex>& h,
                                 const std::vector<Complex>& c,
                                 const BondExponent& bond) {
  const PhaseAxes& axes = bond.axes;
  if (h.size() != axes.field_size() || c.size() != axes.field_size())
    throw std::invalid_argument("hnc_closure: field sizes do not match the axes");
  std::vector<Complex> out(axes.field_size());
  for (std::size_t iq = 0; iq < axes.q.count; ++iq)
    for (std::size_t ip1 = 0; ip1 < axes.p.count; ++ip1)
      for (std::size_t ip2 = 0; ip2 < axes.p.count; ++ip2) {
        const std::size_t id = axes.idx(iq, ip1, ip2);
        out[id] = -1.0 + safe_exp(h[id] - c[id] + bond.exponent(iq, ip1, ip2));
      }
  return out;
}

PicardResult picard_solve(const CorrelationSet& initial, const BondExponent& bond,
                          const ThermalSystem& sys, const PicardOptions& opts) {
  if (!(opts.mixing > 0.0) || opts.mixing > 1.0)
    throw std::invalid_argument("picard_solve: mixing must be in (0, 1]");
  const PhaseAxes& axes = bond.axes;
  const std::size_t total = axes.field_size();

  PicardResult res;
  res.correlations = initial;
  std::vector<Complex>& h = res.correlations.h;
  std::vector<Complex>& c = res.correlations.c;
  const std::vector<double>& rho = res.correlations.rho1;
  if (h.size() != total || c.size() != total)
    throw std::invalid_argument("picard_solve: initial fields do not match the axes");

  const double alpha = opts.mixing;
  const std::size_t nq = axes.q.count, np = axes.p.count;
  for (int it = 0; it < opts.max_iter; ++it) {
    double change = 0.0;

    // c h and its exchange transpose h c agree at the fixed point; their
    // average keeps h12 = h21 exact along the whole iteration
    const std::vector<Complex> conv = oz_convolve(c, h, rho, axes, sys);
    for (std::size_t iq = 0; iq < nq; ++iq)
      for (std::size_t i1 = 0; i1 < np; ++i1)
        for (std::size_t i2 = 0; i2 < np; ++i2) {
          const std::size_t i = axes.idx(iq, i1, i2);
          const Complex sym =
              0.5 * (conv[i] + conv[axes.idx(nq - 1 - iq, i2, i1)]);
          const Complex c_new = h[i] - sym;
          change = std::max(change, std::abs(c_new - c[i]));
          c[i] = (1.0 - alpha) * c[i] + alpha * c_new;
        }

    const std::vector<Complex> h_new = hnc_closure(h, c, bond);
    for (std::size_t i = 0; i < total; ++i) {
      change = std::max(change, std::abs(h_new[i] - h[i]));
      h[i] = (1.0 - alpha) * h[i] + alpha * h_new[i];
    }

    res.report.residuals.push_back(change);
    res.report.iterations = it + 1;
    if (!std::isfinite(change)) break;  // diverged; report as not converged
    if (change < opts.tol) {
      res.report.converged = true;
      break;
    }
  }
  return res;
}

AsymptoteReport asymptote_check(const CorrelationSet& result, const BondExponent& bond) {
  const PhaseAxes& axes = bond.axes;
  const std::size_t nq = axes.q.count, np = axes.p.count;
  AsymptoteReport rep;

  // outer third of the positive-separation side
  const std::size_t start = nq - nq / 3;
  for (std::size_t iq = start; iq < nq; ++iq) {
    double res_q = 0.0;
    for (std::size_t ip1 = 0; ip1 < np; ++ip1)
      for (std::size_t ip2 = 0; ip2 < np; ++ip2) {
        const std::size_t id = axes.idx(iq, ip1, ip2);
        const Complex asym = bond.exponent(iq, ip1, ip2);
        res_q = std::max(res_q, std::abs(result.c[id] - asym));
        rep.max_reference = std::max(rep.max_reference, std::abs(asym));
      }
    rep.residual_by_q.push_back(res_q);
    rep.q_values.push_back(axes.q.coord(iq));
    rep.max_residual = std::max(rep.max_residual, res_q);
  }

  // compare the first and last quarter of the outer-third envelope
  const std::size_t nn = rep.residual_by_q.size();
  if (nn >= 4) {
    double head = 0.0, tail = 0.0;
    for (std::size_t i = 0; i < nn / 4; ++i) head = std::max(head, rep.residual_by_q[i]);
    for (std::size_t i = nn - nn / 4; i < nn; ++i)
      tail = std::max(tail, rep.residual_by_q[i]);
    rep.decreasing_trend = tail < head;
  }
  return rep;
}

}  // namespace qoz
