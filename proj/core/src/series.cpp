#include "qoz/series.hpp"

#include <cmath>

#include "qoz/numdiff.hpp"

namespace qoz {
namespace {

constexpr Complex kI{0.0, 1.0};

// Cartesian derivative tensors of a radial potential u(|x|) through the
// squared-argument form U(s), s = |x|^2. Polynomial chain rule, so the
// results are exact wherever U is smooth.
struct RadialTensors {
  std::array<double, 3> d1{};
  std::array<std::array<double, 3>, 3> d2{};
  double d3[3][3][3] = {};
  double d4[3][3][3][3] = {};
};

RadialTensors radial_tensors(const RadialPotential& u, const Vec& x, int dim) {
  const double s = x.norm2();
  const double f1 = u.eval_s(s, 1);
  const double f2 = u.eval_s(s, 2);
  const double f3 = u.eval_s(s, 3);
  const double f4 = u.eval_s(s, 4);

  RadialTensors t;
  auto delta = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (int a = 0; a < dim; ++a) {
    t.d1[a] = 2.0 * f1 * x[a];
    for (int b = 0; b < dim; ++b) {
      t.d2[a][b] = 4.0 * f2 * x[a] * x[b] + 2.0 * f1 * delta(a, b);
      for (int c = 0; c < dim; ++c) {
        t.d3[a][b][c] = 8.0 * f3 * x[a] * x[b] * x[c] +
                        4.0 * f2 * (delta(a, b) * x[c] + delta(a, c) * x[b] +
                                    delta(b, c) * x[a]);
        for (int d = 0; d < dim; ++d) {
          t.d4[a][b][c][d] =
              16.0 * f4 * x[a] * x[b] * x[c] * x[d] +
              8.0 * f3 *
                  (delta(a, b) * x[c] * x[d] + delta(a, c) * x[b] * x[d] +
                   delta(a, d) * x[b] * x[c] + delta(b, c) * x[a] * x[d] +
                   delta(b, d) * x[a] * x[c] + delta(c, d) * x[a] * x[b]) +
              4.0 * f2 *
                  (delta(a, b) * delta(c, d) + delta(a, c) * delta(b, d) +
                   delta(a, d) * delta(b, c));
        }
      }
    }
  }
  return t;
}

}  // namespace

PotentialTensors potential_tensors(const Configuration& config,
                                   const PotentialModel& model,
                                   const ThermalSystem& sys) {
  const std::size_t n = config.size();
  const int d = sys.dim;
  const std::size_t m = n * static_cast<std::size_t>(d);

  PotentialTensors out;
  out.m = m;
  out.g.assign(m, 0.0);
  out.h.assign(m * m, 0.0);
  out.t3.assign(m * m * m, 0.0);
  out.t4.assign(m * m * m * m, 0.0);

  auto G = [&](std::size_t a) -> double& { return out.g[a]; };
  auto H = [&](std::size_t a, std::size_t b) -> double& { return out.h[a * m + b]; };
  auto T3 = [&](std::size_t a, std::size_t b, std::size_t c) -> double& {
    return out.t3[(a * m + b) * m + c];
  };
  auto T4 = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) -> double& {
    return out.t4[((a * m + b) * m + c) * m + e];
  };

  if (model.singlet) {
    for (std::size_t j = 0; j < n; ++j) {
      const Vec& q = config.positions[j];
      out.value += model.singlet->eval_s(q.norm2(), 0);
      const RadialTensors t = radial_tensors(*model.singlet, q, d);
      const std::size_t o = j * static_cast<std::size_t>(d);
      for (int a = 0; a < d; ++a) {
        G(o + a) += t.d1[a];
        for (int b = 0; b < d; ++b) {
          H(o + a, o + b) += t.d2[a][b];
          for (int c = 0; c < d; ++c) {
            T3(o + a, o + b, o + c) += t.d3[a][b][c];
            for (int e = 0; e < d; ++e)
              T4(o + a, o + b, o + c, o + e) += t.d4[a][b][c][e];
          }
        }
      }
    }
  }

  if (model.pair) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        const Vec x = config.positions[j] - config.positions[k];
        out.value += model.pair->eval_s(x.norm2(), 0);
        const RadialTensors t = radial_tensors(*model.pair, x, d);
        const std::size_t oj = j * static_cast<std::size_t>(d);
        const std::size_t ok = k * static_cast<std::size_t>(d);
        // each derivative index attaches to particle j (+) or k (-)
        auto off = [&](int part, int comp) {
          return (part == 0 ? oj : ok) + static_cast<std::size_t>(comp);
        };
        auto sgn = [](int part) { return part == 0 ? 1.0 : -1.0; };
        for (int pa = 0; pa < 2; ++pa)
          for (int a = 0; a < d; ++a) {
            G(off(pa, a)) += sgn(pa) * t.d1[a];
            for (int pb = 0; pb < 2; ++pb)
              for (int b = 0; b < d; ++b) {
                H(off(pa, a), off(pb, b)) += sgn(pa) * sgn(pb) * t.d2[a][b];
                for (int pc = 0; pc < 2; ++pc)
                  for (int c = 0; c < d; ++c) {
                    T3(off(pa, a), off(pb, b), off(pc, c)) +=
                        sgn(pa) * sgn(pb) * sgn(pc) * t.d3[a][b][c];
                    for (int pe = 0; pe < 2; ++pe)
                      for (int e = 0; e < d; ++e)
                        T4(off(pa, a), off(pb, b), off(pc, c), off(pe, e)) +=
                            sgn(pa) * sgn(pb) * sgn(pc) * sgn(pe) * t.d4[a][b][c][e];
                  }
              }
          }
      }
    }
  }
  return out;
}

PotentialContractions potential_contractions(const PotentialTensors& t,
                                             const Configuration& config) {
  const std::size_t m = t.m;
  const std::size_t d = m / config.size();
  std::vector<double> p(m);
  for (std::size_t j = 0; j < config.size(); ++j)
    for (std::size_t a = 0; a < d; ++a) p[j * d + a] = config.momenta[j][a];

  auto H = [&](std::size_t a, std::size_t b) { return t.h[a * m + b]; };
  auto T3 = [&](std::size_t a, std::size_t b, std::size_t c) {
    return t.t3[(a * m + b) * m + c];
  };
  auto T4 = [&](std::size_t a, std::size_t b, std::size_t c, std::size_t e) {
    return t.t4[((a * m + b) * m + c) * m + e];
  };

  PotentialContractions out;
  for (std::size_t a = 0; a < m; ++a) {
    out.p_grad_u += p[a] * t.g[a];
    out.grad_sq += t.g[a] * t.g[a];
    out.lap_u += H(a, a);
  }
  for (std::size_t a = 0; a < m; ++a) {
    double hp = 0.0;  // (p . hessian)_a
    for (std::size_t b = 0; b < m; ++b) {
      const double hab = H(a, b);
      hp += p[b] * hab;
      out.hess_frob += hab * hab;
      out.pp_hess += p[a] * p[b] * hab;
      out.gugu_hess += t.g[a] * t.g[b] * hab;
      out.p_gradu_hess += p[a] * t.g[b] * hab;
    }
    out.p_hess_sq += hp * hp;
  }
  for (std::size_t a = 0; a < m; ++a) {
    double grad_lap_a = 0.0;  // d_a (lap u)
    for (std::size_t b = 0; b < m; ++b) grad_lap_a += T3(a, b, b);
    out.p_grad_lap += p[a] * grad_lap_a;
    out.gradu_grad_lap += t.g[a] * grad_lap_a;
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t c = 0; c < m; ++c) {
        const double t3v = T3(a, b, c);
        out.ppp_t3 += p[a] * p[b] * p[c] * t3v;
        out.gradu_pp_t3 += t.g[a] * p[b] * p[c] * t3v;
      }
  }
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      double lap_h_ab = 0.0;  // d_a d_b (lap u)
      for (std::size_t c = 0; c < m; ++c) {
        lap_h_ab += T4(a, b, c, c);
        for (std::size_t e = 0; e < m; ++e)
          out.p4_t4 += p[a] * p[b] * p[c] * p[e] * T4(a, b, c, e);
      }
      out.pp_lap_hess += p[a] * p[b] * lap_h_ab;
      if (a == b) out.biharmonic += lap_h_ab;
    }
  // lap(grad u . grad u) = 2 [grad u . grad(lap u) + hess:hess]
  out.lap_grad_sq = 2.0 * (out.gradu_grad_lap + out.hess_frob);
  return out;
}

std::vector<Complex> omega_coefficients(const Configuration& config,
                                        const PotentialModel& model,
                                        const ThermalSystem& sys, int up_to) {
  if (up_to != 2 && up_to != 3)
    throw std::invalid_argument("omega_coefficients: up_to must be 2 or 3");
  const PotentialTensors t = potential_tensors(config, model, sys);
  const PotentialContractions c = potential_contractions(t, config);
  const double hb = sys.hbar, ms = sys.mass;

  std::vector<Complex> w(static_cast<std::size_t>(up_to) + 1);
  w[0] = 1.0;
  w[1] = 0.0;
  w[2] = Complex(-hb * hb / (4.0 * ms) * c.lap_u, -hb / (2.0 * ms) * c.p_grad_u);
  if (up_to >= 3) {
    w[3] = hb * hb / (6.0 * ms) * c.grad_sq -
           std::pow(hb, 4) / (24.0 * ms * ms) * c.biharmonic -
           kI * std::pow(hb, 3) / (6.0 * ms * ms) * c.p_grad_lap +
           hb * hb / (6.0 * ms * ms) * c.pp_hess;
  }
  return w;
}

SeriesResult omega_series_eval(const Configuration& config, const PotentialModel& model,
                               const ThermalSystem& sys, int up_to) {
  const std::vector<Complex> w = omega_coefficients(config, model, sys, up_to);
  SeriesResult r;
  r.order = up_to;
  double bn = 1.0;
  for (std::size_t n = 0; n < w.size(); ++n) {
    r.terms.push_back(w[n] * bn);
    r.value += r.terms.back();
    bn *= sys.beta;
  }
  return r;
}

std::array<Complex, 4> w_coefficients(const Configuration& config,
                                      const PotentialModel& model,
                                      const ThermalSystem& sys) {
  const PotentialTensors t = potential_tensors(config, model, sys);
  const PotentialContractions c = potential_contractions(t, config);
  const double b = sys.beta, ms = sys.mass;
  const double b2 = b * b, b3 = b2 * b, b4 = b3 * b, b5 = b4 * b;
  const double m2 = ms * ms, m3 = m2 * ms, m4 = m3 * ms;

  std::array<Complex, 4> w;
  w[0] = -kI * b2 / (2.0 * ms) * c.p_grad_u;
  w[1] = b3 / (6.0 * m2) * c.pp_hess +
         (b3 / 3.0 * c.grad_sq - b2 / 2.0 * c.lap_u) / (2.0 * ms);
  w[2] = kI * (b4 / (24.0 * m3) * c.ppp_t3 + 5.0 * b4 / (24.0 * m2) * c.p_gradu_hess -
               b3 / (6.0 * m2) * c.p_grad_lap);
  w[3] = -b5 / (120.0 * m4) * c.p4_t4 - 3.0 * b5 / (40.0 * m3) * c.gradu_pp_t3 -
         b5 / (15.0 * m2) * c.gugu_hess + b4 / (16.0 * m2) * c.gradu_grad_lap +
         b4 / (16.0 * m3) * c.pp_lap_hess + b4 / (48.0 * m2) * c.lap_grad_sq -
         b3 / (24.0 * m2) * c.biharmonic - b5 / (15.0 * m3) * c.p_hess_sq;
  return w;
}

SeriesResult w_series_eval(const Configuration& config, const PotentialModel& model,
                           const ThermalSystem& sys, int order) {
  if (order < 0 || order > 4)
    throw std::invalid_argument("w_series_eval: closed forms end at order 4");
  SeriesResult r;
  r.order = order;
  if (order == 0) return r;  // classical limit
  const std::array<Complex, 4> w = w_coefficients(config, model, sys);
  double hn = 1.0;
  for (int n = 1; n <= order; ++n) {
    hn *= sys.hbar;
    r.terms.push_back(w[static_cast<std::size_t>(n - 1)] * hn);
    r.value += r.terms.back();
  }
  return r;
}

OmegaRecursion1D omega_recursion_1d(const Axis& axis, const std::vector<double>& u_grid,
                                    double p, const ThermalSystem& sys, int n_max) {
  if (n_max < 2) throw std::invalid_argument("omega_recursion_1d: n_max must be >= 2");
  if (u_grid.size() != axis.count)
    throw std::invalid_argument("omega_recursion_1d: grid size mismatch");
  const std::size_t n = axis.count;
  const double h = axis.spacing;
  const double hb = sys.hbar, ms = sys.mass;

  const std::vector<double> du = derivative1(u_grid, h);
  const std::vector<double> d2u = derivative2(u_grid, h);

  OmegaRecursion1D out;
  out.axis = axis;
  out.orders.assign(static_cast<std::size_t>(n_max) + 1, std::vector<Complex>(n));
  for (std::size_t i = 0; i < n; ++i) out.orders[0][i] = 1.0;
  // orders[1] stays zero: no beta^0 source on the right hand side

  for (int nn = 1; nn < n_max; ++nn) {
    const auto& w_n = out.orders[static_cast<std::size_t>(nn)];
    const auto& w_nm1 = out.orders[static_cast<std::size_t>(nn - 1)];
    const std::vector<Complex> dw_n = derivative1(w_n, h);
    const std::vector<Complex> d2w_n = derivative2(w_n, h);
    const std::vector<Complex> dw_nm1 = derivative1(w_nm1, h);

    auto& w_np1 = out.orders[static_cast<std::size_t>(nn) + 1];
    const double inv = 1.0 / (nn + 1);
    for (std::size_t i = 0; i < n; ++i) {
      Complex rhs = -hb * hb / (2.0 * ms) * d2u[i] * w_nm1[i] -
                    hb * hb / ms * du[i] * dw_nm1[i] +
                    hb * hb / (2.0 * ms) * d2w_n[i] +
                    kI * hb / ms * p * dw_n[i] -
                    kI * hb / ms * p * du[i] * w_nm1[i];
      if (nn >= 2) {
        const auto& w_nm2 = out.orders[static_cast<std::size_t>(nn - 2)];
        rhs += hb * hb / (2.0 * ms) * du[i] * du[i] * w_nm2[i];
      }
      w_np1[i] = inv * rhs;
    }
  }
  return out;
}

}  // namespace qoz
