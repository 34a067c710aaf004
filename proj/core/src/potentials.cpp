#include "qoz/potentials.hpp"

#include <cmath>

namespace qoz {
namespace {

void check_order(int order) {
  if (order < 0 || order > 4)
    throw std::invalid_argument("potential derivative order must be in 0..4");
}

// d^n/dx^n of x^(-k) = (-1)^n k(k+1)...(k+n-1) x^(-k-n)
double inverse_power_deriv(double x, int k, int n) {
  double coeff = 1.0;
  for (int j = 0; j < n; ++j) coeff *= -(k + j);
  return coeff * std::pow(x, -(k + n));
}

}  // namespace

// ---------------------------------------------------------------- LennardJones

LennardJones::LennardJones(double eps, double sigma) : eps_(eps), sigma_(sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("LennardJones: sigma must be > 0");
}

double LennardJones::r_min() const { return std::pow(2.0, 1.0 / 6.0) * sigma_; }

double LennardJones::eval(double r, int order) const {
  check_order(order);
  if (!(r > 0.0)) throw std::domain_error("LennardJones: r must be > 0");
  const double s6 = std::pow(sigma_, 6), s12 = s6 * s6;
  return 4.0 * eps_ * (s12 * inverse_power_deriv(r, 12, order) -
                       s6 * inverse_power_deriv(r, 6, order));
}

double LennardJones::eval_s(double s, int order) const {
  check_order(order);
  if (!(s > 0.0)) throw std::domain_error("LennardJones: s must be > 0");
  const double s6 = std::pow(sigma_, 6), s12 = s6 * s6;
  return 4.0 * eps_ * (s12 * inverse_power_deriv(s, 6, order) -
                       s6 * inverse_power_deriv(s, 3, order));
}

// ---------------------------------------------------------------- GaussianWell

GaussianWell::GaussianWell(double depth, double width) : depth_(depth), width_(width) {
  if (!(width > 0.0)) throw std::invalid_argument("GaussianWell: width must be > 0");
}

double GaussianWell::eval(double r, int order) const {
  check_order(order);
  const double a = 1.0 / (2.0 * width_ * width_);
  const double g = -depth_ * std::exp(-a * r * r);
  switch (order) {
    case 0: return g;
    case 1: return -2.0 * a * r * g;
    case 2: return (4.0 * a * a * r * r - 2.0 * a) * g;
    case 3: return (12.0 * a * a * r - 8.0 * a * a * a * r * r * r) * g;
    default: {
      const double r2 = r * r;
      return (12.0 * a * a - 48.0 * a * a * a * r2 + 16.0 * a * a * a * a * r2 * r2) * g;
    }
  }
}

double GaussianWell::eval_s(double s, int order) const {
  check_order(order);
  const double a = 1.0 / (2.0 * width_ * width_);
  return -depth_ * std::pow(-a, order) * std::exp(-a * s);
}

// -------------------------------------------------------------------- Harmonic

Harmonic::Harmonic(double mass, double omega) : mass_(mass), omega_(omega) {
  if (!(mass > 0.0) || !(omega > 0.0))
    throw std::invalid_argument("Harmonic: mass and omega must be > 0");
}

double Harmonic::eval(double r, int order) const {
  check_order(order);
  const double k = mass_ * omega_ * omega_;
  switch (order) {
    case 0: return 0.5 * k * r * r;
    case 1: return k * r;
    case 2: return k;
    default: return 0.0;
  }
}

double Harmonic::eval_s(double s, int order) const {
  check_order(order);
  const double k = mass_ * omega_ * omega_;
  switch (order) {
    case 0: return 0.5 * k * s;
    case 1: return 0.5 * k;
    default: return 0.0;
  }
}

// -------------------------------------------------------- RegularizedPotential

RegularizedPotential::RegularizedPotential(std::shared_ptr<const RadialPotential> base,
                                           double r_c, double cap)
    : base_(std::move(base)), r_c_(r_c), cap_(cap) {
  if (!base_) throw std::invalid_argument("RegularizedPotential: null base");
  if (!(r_c > 0.0)) throw std::invalid_argument("RegularizedPotential: r_c must be > 0");
}

double RegularizedPotential::eval(double r, int order) const {
  if (order != 0)
    throw std::invalid_argument("RegularizedPotential: only order 0 is defined");
  const double g = std::exp(-std::pow(r / r_c_, 12));
  const double bare = (r > 0.0) ? base_->eval(r, 0) : cap_;
  // g -> 1 at the origin, so the (possibly divergent) bare value is never used there
  if (1.0 - g == 0.0) return cap_;
  return bare * (1.0 - g) + cap_ * g;
}

double RegularizedPotential::eval_s(double s, int order) const {
  if (order != 0)
    throw std::invalid_argument("RegularizedPotential: only order 0 is defined");
  return eval(std::sqrt(s), 0);
}

// -------------------------------------------------------------- free functions

double lj_pair_derivatives(double r, int order, double eps, double sigma) {
  return LennardJones(eps, sigma).eval(r, order);
}

double sho_singlet_derivatives(double q, int order, double mass, double omega) {
  return Harmonic(mass, omega).eval(q, order);
}

}  // namespace qoz
