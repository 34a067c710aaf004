#include "qoz/linear_fourier.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qoz {
namespace {

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    -0.9894009349916499, -0.9445750230732326, -0.8656312023878318, -0.7554044083550030,
    -0.6178762444026438, -0.4580167776572274, -0.2816035507792589, -0.0950125098376374,
    0.0950125098376374,  0.2816035507792589,  0.4580167776572274,  0.6178762444026438,
    0.7554044083550030,  0.8656312023878318,  0.9445750230732326,  0.9894009349916499};
constexpr double kGLw[kGL] = {
    0.0271524594117541, 0.0622535239386479, 0.0951585116824928, 0.1246289712555339,
    0.1495959888165767, 0.1691565193950025, 0.1826034150449236, 0.1894506104550685,
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
    0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};

// Integration range: grow until the potential magnitude is negligible.
double integration_range(const RadialPotential& u) {
  double scale = 0.0;
  for (double r = 0.0625; r <= 64.0; r *= 2.0)
    scale = std::max(scale, std::abs(u.eval(r, 0)));
  if (scale == 0.0) return 1.0;
  double rmax = 1.0;
  while (rmax < 1e4 && std::abs(u.eval(rmax, 0)) > 1e-15 * scale) rmax *= 1.5;
  return rmax;
}

// Composite Gauss-Legendre over [0, rmax] with panels fine enough for the
// oscillation wavelength at |k|.
template <typename F>
double oscillatory_integral(const F& f, double rmax, double k) {
  double panel = rmax / 16.0;
  if (k > 0.0) panel = std::min(panel, 0.5 * kPi / k);  // quarter period
  const int n_panels = std::max(1, static_cast<int>(std::ceil(rmax / panel)));
  const double h = rmax / n_panels;
  double total = 0.0;
  for (int p = 0; p < n_panels; ++p) {
    const double a = p * h, mid = a + 0.5 * h;
    double acc = 0.0;
    for (int i = 0; i < kGL; ++i) acc += kGLw[i] * f(mid + 0.5 * h * kGLx[i]);
    total += 0.5 * h * acc;
  }
  return total;
}

const RadialPotential& require_fourier_safe(
    const RadialPotential& pair, const std::optional<FourierRegularization>& reg,
    std::shared_ptr<const RadialPotential>& holder) {
  if (reg) {
    // wrap; caller keeps potential alive, holder keeps the wrapper alive
    holder = std::make_shared<RegularizedPotential>(
        std::shared_ptr<const RadialPotential>(&pair, [](const RadialPotential*) {}),
        reg->r_c, reg->u_cap);
    return *holder;
  }
  if (!pair.fourier_safe())
    throw std::invalid_argument(
        "pair_potential_ft: hard-core potential needs a regularization");
  return pair;
}

}  // namespace

SpectralPairField::SpectralPairField(std::vector<double> p_axis_, int n_, double extent_)
    : p_axis(std::move(p_axis_)), n(n_), extent(extent_) {
  if (n <= 0 || !(extent > 0.0))
    throw std::invalid_argument("SpectralPairField: bad grid parameters");
  data.assign(p_axis.size() * slice_size(), Complex{});
}

std::vector<double> pair_potential_ft_radial(
    const RadialPotential& pair, const std::vector<double>& k_values,
    const std::optional<FourierRegularization>& reg) {
  std::shared_ptr<const RadialPotential> holder;
  const RadialPotential& u = require_fourier_safe(pair, reg, holder);
  const double rmax = integration_range(u);

  std::vector<double> out(k_values.size());
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    const double k = std::abs(k_values[i]);
    out[i] = 2.0 * kPi *
             oscillatory_integral(
                 [&](double r) { return r * u.eval(r, 0) * std::cyl_bessel_j(0.0, k * r); },
                 rmax, k);
  }
  return out;
}

std::vector<double> pair_potential_ft_radial_1d(
    const RadialPotential& pair, const std::vector<double>& k_values,
    const std::optional<FourierRegularization>& reg) {
  std::shared_ptr<const RadialPotential> holder;
  const RadialPotential& u = require_fourier_safe(pair, reg, holder);
  const double rmax = integration_range(u);

  std::vector<double> out(k_values.size());
  for (std::size_t i = 0; i < k_values.size(); ++i) {
    const double k = std::abs(k_values[i]);
    out[i] = 2.0 * oscillatory_integral(
                       [&](double r) { return u.eval(r, 0) * std::cos(k * r); }, rmax, k);
  }
  return out;
}

std::vector<double> pair_potential_ft(const RadialPotential& pair, int n, double extent,
                                      const std::optional<FourierRegularization>& reg) {
  const double dk = 2.0 * kPi / extent;
  const std::size_t nn = static_cast<std::size_t>(n);

  // the transform depends on |k| only; evaluate unique magnitudes once
  std::map<std::int64_t, double> cache_keys;  // km^2 in integer mode units -> k
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const std::int64_t mx = fft_mode(ix, nn), mz = fft_mode(iz, nn);
      cache_keys.emplace(mx * mx + mz * mz, dk * std::sqrt(double(mx * mx + mz * mz)));
    }
  std::vector<double> ks;
  ks.reserve(cache_keys.size());
  for (auto& [key, k] : cache_keys) ks.push_back(k);
  const std::vector<double> vals = pair_potential_ft_radial(pair, ks, reg);
  std::map<std::int64_t, double> table;
  std::size_t j = 0;
  for (auto& [key, k] : cache_keys) table[key] = vals[j++];

  std::vector<double> out(nn * nn);
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const std::int64_t mx = fft_mode(ix, nn), mz = fft_mode(iz, nn);
      out[ix * nn + iz] = table[mx * mx + mz * mz];
    }
  return out;
}

double b_factor(double p_z, double kx, double kz, const ThermalSystem& sys) {
  const double k2 = kx * kx + kz * kz;
  return -sys.hbar * p_z * kz / sys.mass - sys.hbar * sys.hbar * k2 / sys.mass;
}

Complex linear_solution_value(double u_hat, double b, double beta) {
  const double x = beta * b;
  if (std::abs(x) < 1e-8)
    return -u_hat * beta * (1.0 + x / 2.0 + x * x / 6.0);
  return (-u_hat / b) * std::expm1(x);
}

SpectralPairField linear_solution(const std::vector<double>& u_hat,
                                  const std::vector<double>& p_axis, int n, double extent,
                                  const ThermalSystem& sys, double beta) {
  if (beta < 0.0) throw std::invalid_argument("linear_solution: beta must be >= 0");
  SpectralPairField f(p_axis, n, extent);
  const std::size_t nn = static_cast<std::size_t>(n);
  if (u_hat.size() != nn * nn)
    throw std::invalid_argument("linear_solution: u_hat size mismatch");
  for (std::size_t ip = 0; ip < f.p_axis.size(); ++ip) {
    const double pz = f.p_axis[ip];
    for (std::size_t ix = 0; ix < nn; ++ix) {
      const double kx = f.k_of(ix);
      for (std::size_t iz = 0; iz < nn; ++iz) {
        const double kz = f.k_of(iz);
        f.at(ip, ix, iz) =
            linear_solution_value(u_hat[ix * nn + iz], b_factor(pz, kx, kz, sys), beta);
      }
    }
  }
  return f;
}

std::vector<Complex> backward_slice(const std::vector<Complex>& w_spectral, int n,
                                    double extent, Fft& fft) {
  const std::size_t nn = static_cast<std::size_t>(n);
  const double dk = 2.0 * kPi / extent;
  const double scale = dk * dk / (4.0 * kPi * kPi);
  // centered output: fold exp(-i k L/2) = (-1)^(mx+mz) into the input
  std::vector<Complex> tmp(nn * nn);
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const int par = (fft_mode(ix, nn) + fft_mode(iz, nn)) & 1;
      tmp[ix * nn + iz] = (par ? -1.0 : 1.0) * w_spectral[ix * nn + iz];
    }
  std::vector<Complex> out;
  fft.backward(tmp, out);
  for (Complex& z : out) z *= scale;
  return out;
}

std::vector<Complex> forward_slice(const std::vector<Complex>& w_position, int n,
                                   double extent, Fft& fft) {
  const std::size_t nn = static_cast<std::size_t>(n);
  const double dq = extent / n;
  std::vector<Complex> out;
  fft.forward(w_position, out);
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const int par = (fft_mode(ix, nn) + fft_mode(iz, nn)) & 1;
      out[ix * nn + iz] *= (par ? -1.0 : 1.0) * dq * dq;
    }
  return out;
}

ComplexGrid inverse_to_table(const SpectralPairField& spectral) {
  const int n = spectral.n;
  if (n % 2 != 0)
    throw std::invalid_argument("inverse_to_table: node count must be even");
  const std::size_t np = spectral.p_axis.size();
  if (np == 0) throw std::invalid_argument("inverse_to_table: empty momentum axis");

  double dp = 1.0;
  if (np > 1) {
    dp = spectral.p_axis[1] - spectral.p_axis[0];
    for (std::size_t i = 1; i + 1 < np; ++i) {
      const double step = spectral.p_axis[i + 1] - spectral.p_axis[i];
      if (std::abs(step - dp) > 1e-12 * std::abs(dp))
        throw std::invalid_argument("inverse_to_table: momentum axis must be uniform");
    }
  }

  const double L = spectral.extent;
  const double dq = L / n;
  std::vector<Axis> axes{Axis(spectral.p_axis.front(), dp, np),
                         Axis(-L / 2.0, dq, static_cast<std::size_t>(n)),
                         Axis(-L / 2.0, dq, static_cast<std::size_t>(n))};
  ComplexGrid table = ComplexGrid::zeros(axes);

  Fft fft = Fft::make_2d(n, n);
  const std::size_t ss = spectral.slice_size();
  for (std::size_t ip = 0; ip < np; ++ip) {
    std::vector<Complex> in(spectral.slice(ip), spectral.slice(ip) + ss);
    const std::vector<Complex> w = backward_slice(in, n, L, fft);
    std::copy(w.begin(), w.end(), table.data().begin() + ip * ss);
  }
  return table;
}

std::vector<Complex> quadratic_term_spectral(const std::vector<Complex>& w_hat, int n,
                                             double extent, const ThermalSystem& sys,
                                             Fft& fft, bool dealias) {
  const std::size_t nn = static_cast<std::size_t>(n);
  if (w_hat.size() != nn * nn)
    throw std::invalid_argument("quadratic_term_spectral: size mismatch");
  const double dk = 2.0 * kPi / extent;
  const int mcut = n / 3;

  auto masked = [&](std::size_t ix, std::size_t iz) {
    if (!dealias) return false;
    return std::abs(fft_mode(ix, nn)) > mcut || std::abs(fft_mode(iz, nn)) > mcut;
  };

  // gradients in position space from ik * w_hat
  std::vector<Complex> gx_hat(nn * nn), gz_hat(nn * nn);
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const std::size_t id = ix * nn + iz;
      const Complex w = masked(ix, iz) ? Complex{} : w_hat[id];
      gx_hat[id] = Complex(0.0, dk * fft_mode(ix, nn)) * w;
      gz_hat[id] = Complex(0.0, dk * fft_mode(iz, nn)) * w;
    }
  std::vector<Complex> gx, gz;
  fft.backward(gx_hat, gx);
  fft.backward(gz_hat, gz);
  // continuous-convention measures: dk^2/(2 pi)^2 into position space,
  // dq^2 back out
  const double to_pos = dk * dk / (4.0 * kPi * kPi);
  std::vector<Complex> sq(nn * nn);
  for (std::size_t i = 0; i < nn * nn; ++i) {
    const Complex a = gx[i] * to_pos, b = gz[i] * to_pos;
    sq[i] = a * a + b * b;
  }
  std::vector<Complex> sq_hat;
  fft.forward(sq, sq_hat);

  // (hbar^2/m) F[ |grad w|^2 ], equal to the dealiased k-space convolution
  const double dq = extent / n;
  const double coeff = sys.hbar * sys.hbar / sys.mass * dq * dq;
  std::vector<Complex> out(nn * nn);
  for (std::size_t ix = 0; ix < nn; ++ix)
    for (std::size_t iz = 0; iz < nn; ++iz) {
      const std::size_t id = ix * nn + iz;
      out[id] = masked(ix, iz) ? Complex{} : coeff * sq_hat[id];
    }
  return out;
}

NonlinearCorrection first_nonlinear_correction(const std::vector<double>& u_hat,
                                               const std::vector<double>& p_axis, int n,
                                               double extent, const ThermalSystem& sys,
                                               double beta, int gauss_nodes) {
  if (gauss_nodes < 1) throw std::invalid_argument("first_nonlinear_correction: nodes >= 1");
  const std::size_t nn = static_cast<std::size_t>(n);

  // map [0,beta] onto repeated 16-point rules
  const int panels = (gauss_nodes + kGL - 1) / kGL;
  std::vector<double> bnodes, bweights;
  const double h = beta / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int i = 0; i < kGL; ++i) {
      bnodes.push_back(mid + 0.5 * h * kGLx[i]);
      bweights.push_back(0.5 * h * kGLw[i]);
    }
  }

  NonlinearCorrection out;
  out.field = SpectralPairField(p_axis, n, extent);
  out.slice_ratio.assign(p_axis.size(), 0.0);

  Fft fft = Fft::make_2d(n, n);
  for (std::size_t ip = 0; ip < p_axis.size(); ++ip) {
    const double pz = p_axis[ip];
    std::vector<Complex> acc(nn * nn, Complex{});
    for (std::size_t g = 0; g < bnodes.size(); ++g) {
      const double bp = bnodes[g];
      // linear solution at the intermediate temperature
      std::vector<Complex> wlin(nn * nn);
      for (std::size_t ix = 0; ix < nn; ++ix)
        for (std::size_t iz = 0; iz < nn; ++iz) {
          const double b = b_factor(pz, out.field.k_of(ix), out.field.k_of(iz), sys);
          wlin[ix * nn + iz] = linear_solution_value(u_hat[ix * nn + iz], b, bp);
        }
      const std::vector<Complex> q = quadratic_term_spectral(wlin, n, extent, sys, fft);
      for (std::size_t ix = 0; ix < nn; ++ix)
        for (std::size_t iz = 0; iz < nn; ++iz) {
          const double b = b_factor(pz, out.field.k_of(ix), out.field.k_of(iz), sys);
          acc[ix * nn + iz] += bweights[g] * std::exp((beta - bp) * b) * q[ix * nn + iz];
        }
    }

    double max_corr = 0.0, max_lin = 0.0;
    for (std::size_t ix = 0; ix < nn; ++ix)
      for (std::size_t iz = 0; iz < nn; ++iz) {
        const std::size_t id = ix * nn + iz;
        out.field.at(ip, ix, iz) = acc[id];
        max_corr = std::max(max_corr, std::abs(acc[id]));
        const double b = b_factor(pz, out.field.k_of(ix), out.field.k_of(iz), sys);
        max_lin = std::max(max_lin,
                           std::abs(linear_solution_value(u_hat[id], b, beta)));
      }
    out.slice_ratio[ip] = max_lin > 0.0 ? max_corr / max_lin : 0.0;
    out.max_ratio = std::max(out.max_ratio, out.slice_ratio[ip]);
  }
  return out;
}

}  // namespace qoz
