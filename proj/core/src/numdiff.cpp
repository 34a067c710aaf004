#include "qoz/numdiff.hpp"

#include <stdexcept>

namespace qoz {
namespace {

template <typename T>
void d1(std::span<const T> f, double h, std::span<T> out) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("derivative1: need at least 3 nodes");
  if (out.size() != n) throw std::invalid_argument("derivative1: output size mismatch");
  const double inv2h = 1.0 / (2.0 * h);
  out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv2h;
  for (std::size_t i = 1; i + 1 < n; ++i) out[i] = (f[i + 1] - f[i - 1]) * inv2h;
  out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv2h;
}

template <typename T>
void d2(std::span<const T> f, double h, std::span<T> out) {
  const std::size_t n = f.size();
  if (n < 4) throw std::invalid_argument("derivative2: need at least 4 nodes");
  if (out.size() != n) throw std::invalid_argument("derivative2: output size mismatch");
  const double invh2 = 1.0 / (h * h);
  out[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * invh2;
  for (std::size_t i = 1; i + 1 < n; ++i)
    out[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * invh2;
  out[n - 1] = (2.0 * f[n - 1] - 5.0 * f[n - 2] + 4.0 * f[n - 3] - f[n - 4]) * invh2;
}

}  // namespace

void derivative1(std::span<const Complex> f, double h, std::span<Complex> out) { d1(f, h, out); }
void derivative1(std::span<const double> f, double h, std::span<double> out) { d1(f, h, out); }
void derivative2(std::span<const Complex> f, double h, std::span<Complex> out) { d2(f, h, out); }
void derivative2(std::span<const double> f, double h, std::span<double> out) { d2(f, h, out); }

std::vector<Complex> derivative1(const std::vector<Complex>& f, double h) {
  std::vector<Complex> out(f.size());
  derivative1(std::span<const Complex>(f), h, std::span<Complex>(out));
  return out;
}
std::vector<double> derivative1(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size());
  derivative1(std::span<const double>(f), h, std::span<double>(out));
  return out;
}
std::vector<Complex> derivative2(const std::vector<Complex>& f, double h) {
  std::vector<Complex> out(f.size());
  derivative2(std::span<const Complex>(f), h, std::span<Complex>(out));
  return out;
}
std::vector<double> derivative2(const std::vector<double>& f, double h) {
  std::vector<double> out(f.size());
  derivative2(std::span<const double>(f), h, std::span<double>(out));
  return out;
}

}  // namespace qoz
