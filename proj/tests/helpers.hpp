#pragma once

#include <cmath>
#include <functional>
#include <random>

#include "qoz/types.hpp"

namespace qoz::test {

inline std::mt19937_64 rng(std::uint64_t seed = 20240817) { return std::mt19937_64(seed); }

/// Central finite differences of a scalar function, orders 1..4.
inline double central_diff(const std::function<double(double)>& f, double x, double h,
                           int order) {
  switch (order) {
    case 1: return (f(x + h) - f(x - h)) / (2.0 * h);
    case 2: return (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h);
    case 3:
      return (f(x + 2 * h) - 2.0 * f(x + h) + 2.0 * f(x - h) - f(x - 2 * h)) /
             (2.0 * h * h * h);
    default:
      return (f(x + 2 * h) - 4.0 * f(x + h) + 6.0 * f(x) - 4.0 * f(x - h) + f(x - 2 * h)) /
             (h * h * h * h);
  }
}

/// Two-level Richardson extrapolation of the central stencils; error order
/// h^6 instead of h^2, which keeps the oracle within 1e-6 relative without
/// driving h into roundoff.
inline double central_diff_rich(const std::function<double(double)>& f, double x,
                                double h, int order) {
  const double d1 = central_diff(f, x, h, order);
  const double d2 = central_diff(f, x, h / 2.0, order);
  const double d4 = central_diff(f, x, h / 4.0, order);
  const double r1 = (4.0 * d2 - d1) / 3.0;
  const double r2 = (4.0 * d4 - d2) / 3.0;
  return (16.0 * r2 - r1) / 15.0;
}

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-30);
  return std::abs(got - want) / scale;
}

inline double cdist(const Complex& a, const Complex& b) { return std::abs(a - b); }

}  // namespace qoz::test
