#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "qoz/oz.hpp"

using namespace qoz;

namespace {

// independently coded scalar HNC solver used as the classical oracle;
// shares only the discretization conventions (trapezoid, zero extension)
struct ClassicalHnc {
  Axis q;
  std::vector<double> beta_u;
  double density;

  std::vector<double> h, c;

  explicit ClassicalHnc(Axis q_, std::vector<double> bu, double n)
      : q(q_), beta_u(std::move(bu)), density(n), h(q.count, 0.0), c(q.count, 0.0) {}

  std::vector<double> convolve() const {
    const std::size_t n = q.count;
    std::vector<double> out(n, 0.0);
    for (std::size_t is = 0; is < n; ++is) {
      double acc = 0.0;
      for (std::size_t it = 0; it < n; ++it) {
        const double s = q.coord(is), t = q.coord(it);
        const double iu_f = (s - t - q.origin) / q.spacing;
        const std::ptrdiff_t iu = std::llround(iu_f);
        if (iu < 0 || iu >= static_cast<std::ptrdiff_t>(n)) continue;
        const double w = (it == 0 || it + 1 == n) ? 0.5 : 1.0;
        acc += w * c[it] * h[static_cast<std::size_t>(iu)];
      }
      out[is] = density * acc * q.spacing;
    }
    return out;
  }

  bool solve(double alpha, int max_iter, double tol) {
    for (int it = 0; it < max_iter; ++it) {
      double change = 0.0;
      const std::vector<double> conv = convolve();
      for (std::size_t i = 0; i < q.count; ++i) {
        const double c_new = h[i] - conv[i];
        change = std::max(change, std::abs(c_new - c[i]));
        c[i] = (1.0 - alpha) * c[i] + alpha * c_new;
      }
      for (std::size_t i = 0; i < q.count; ++i) {
        const double e = -beta_u[i] + h[i] - c[i];
        const double h_new = (e < -700.0) ? -1.0 : std::expm1(e);
        change = std::max(change, std::abs(h_new - h[i]));
        h[i] = (1.0 - alpha) * h[i] + alpha * h_new;
      }
      if (change < tol) return true;
    }
    return false;
  }
};

PhaseAxes small_axes() {
  PhaseAxes ax;
  ax.q = Axis::symmetric(5.0, 41);
  ax.p = Axis::symmetric(4.0, 5);
  return ax;
}

}  // namespace

TEST_CASE("maxwell singlet density normalization") {
  const ThermalSystem sys(0.7, 1.0, 1.3, 1);
  const Axis p = Axis::symmetric(12.0, 161);
  const double n = 0.23;
  const std::vector<double> rho = rho1_maxwell(n, p, sys);
  double integral = 0.0;
  for (std::size_t i = 0; i < p.count; ++i) {
    const double w = (i == 0 || i + 1 == p.count) ? 0.5 : 1.0;
    integral += w * rho[i];
  }
  integral *= p.spacing / (2.0 * kPi * sys.hbar);
  CHECK(integral == doctest::Approx(n).epsilon(1e-8));
  for (double v : rho) CHECK(v > 0.0);
}

TEST_CASE("bond exponent and generalized pair bond function") {
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);
  PhaseAxes ax = small_axes();

  SUBCASE("all pieces zero gives f = 0") {
    BondExponent bond;
    bond.axes = ax;
    bond.beta_u.assign(ax.q.count, 0.0);
    // relative momenta whose halves are solver nodes
    const MayerField f = mayer_f(bond, Axis::symmetric(8.0, 5));
    for (const Complex& v : f.f) CHECK(std::abs(v) == 0.0);
  }

  SUBCASE("classical limit at the potential minimum") {
    // beta eps = 1: f(r_min) = e^1 - 1
    const LennardJones lj(1.0, 1.0);
    PhaseAxes lax;
    const double rmin = lj.r_min();
    lax.q = Axis(rmin - 2.0, 0.125, 49);  // node 16 sits exactly on r_min
    lax.p = Axis::symmetric(2.0, 3);
    BondExponent bond;
    bond.axes = lax;
    bond.beta_u.resize(lax.q.count);
    for (std::size_t i = 0; i < lax.q.count; ++i)
      bond.beta_u[i] = sys.beta * lj.eval(std::abs(lax.q.coord(i)), 0);
    const MayerField f = mayer_f(bond, Axis::symmetric(4.0, 3));
    const Complex fmin = f.at(1, 16);
    CHECK(fmin.real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(fmin.imag() == 0.0);
    // |1 + f| -> 1 at the far edge
    CHECK(std::abs(1.0 + f.at(1, lax.q.count - 1)) == doctest::Approx(1.0).epsilon(1e-3));
  }

  SUBCASE("dimer phase field is unimodular with conjugacy") {
    const std::vector<Complex> eta = eta2_dimer_field(ax, sys, Statistics::fermi);
    for (std::size_t iq = 0; iq < ax.q.count; ++iq)
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2) {
          const Complex v = eta[ax.idx(iq, i1, i2)];
          CHECK(std::abs(v) == doctest::Approx(1.0));
          // swapping both momenta with sign flips conjugates the phase
          const Complex m = eta[ax.idx(iq, ax.p.count - 1 - i1, ax.p.count - 1 - i2)];
          CHECK(test::cdist(std::conj(v), m) < 1e-12);
        }
  }
}

TEST_CASE("phase-space convolution") {
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);
  PhaseAxes ax = small_axes();
  const std::vector<double> rho = rho1_maxwell(0.15, ax.p, sys);

  SUBCASE("zero direct correlation gives zero") {
    std::vector<Complex> c(ax.field_size(), Complex{});
    std::vector<Complex> h(ax.field_size(), Complex(0.3, 0.1));
    const std::vector<Complex> out = oz_convolve(c, h, rho, ax, sys);
    for (const Complex& v : out) CHECK(std::abs(v) == 0.0);
  }

  SUBCASE("momentum-independent fields factor into the classical convolution") {
    std::vector<Complex> c(ax.field_size()), h(ax.field_size());
    auto cq = [&](double q) { return std::exp(-q * q); };
    auto hq = [&](double q) { return 0.4 * std::exp(-0.5 * q * q); };
    for (std::size_t iq = 0; iq < ax.q.count; ++iq)
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2) {
          c[ax.idx(iq, i1, i2)] = cq(ax.q.coord(iq));
          h[ax.idx(iq, i1, i2)] = hq(ax.q.coord(iq));
        }
    const std::vector<Complex> out = oz_convolve(c, h, rho, ax, sys);

    // classical oracle with n = int dp rho / 2 pi hbar
    double n_eff = 0.0;
    for (std::size_t i = 0; i < ax.p.count; ++i) {
      const double w = (i == 0 || i + 1 == ax.p.count) ? 0.5 : 1.0;
      n_eff += w * rho[i];
    }
    n_eff *= ax.p.spacing / (2.0 * kPi * sys.hbar);

    ClassicalHnc oracle(ax.q, std::vector<double>(ax.q.count, 0.0), n_eff);
    for (std::size_t i = 0; i < ax.q.count; ++i) {
      oracle.c[i] = cq(ax.q.coord(i));
      oracle.h[i] = hq(ax.q.coord(i));
    }
    const std::vector<double> want = oracle.convolve();
    for (std::size_t iq = 0; iq < ax.q.count; ++iq)
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2) {
          CHECK(std::abs(out[ax.idx(iq, i1, i2)] - want[iq]) < 1e-10);
        }
  }

  SUBCASE("four-node toy grid matches the hand-written double sum") {
    PhaseAxes toy;
    toy.q = Axis(-1.0, 0.5, 4);
    toy.p = Axis(-0.6, 0.6, 3);
    auto rng = test::rng(83);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Complex> c(toy.field_size()), h(toy.field_size());
    for (Complex& z : c) z = Complex(u(rng), u(rng));
    for (Complex& z : h) z = Complex(u(rng), u(rng));
    std::vector<double> rho3(toy.p.count);
    for (double& r : rho3) r = 0.5 + u(rng) * 0.2;

    const std::vector<Complex> fast = oz_convolve(c, h, rho3, toy, sys);

    const double measure = toy.q.spacing * toy.p.spacing / (2.0 * kPi * sys.hbar);
    for (std::size_t is = 0; is < 4; ++is)
      for (std::size_t i1 = 0; i1 < 3; ++i1)
        for (std::size_t i2 = 0; i2 < 3; ++i2) {
          Complex acc{};
          for (std::size_t it = 0; it < 4; ++it) {
            // s - t index arithmetic on the uniform axis
            const std::ptrdiff_t iu =
                static_cast<std::ptrdiff_t>(is) - static_cast<std::ptrdiff_t>(it) + 2;
            if (iu < 0 || iu >= 4) continue;
            const double wq = (it == 0 || it == 3) ? 0.5 : 1.0;
            for (std::size_t i3 = 0; i3 < 3; ++i3) {
              const double wp = (i3 == 0 || i3 == 2) ? 0.5 : 1.0;
              acc += wq * wp * rho3[i3] * c[toy.idx(it, i1, i3)] *
                     h[toy.idx(static_cast<std::size_t>(iu), i3, i2)];
            }
          }
          CHECK(test::cdist(fast[toy.idx(is, i1, i2)], acc * measure) < 1e-12);
        }
  }
}

TEST_CASE("hypernetted chain closure") {
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);
  PhaseAxes ax = small_axes();
  BondExponent bond;
  bond.axes = ax;
  bond.beta_u.assign(ax.q.count, 0.0);

  SUBCASE("h = c with no bond gives zero") {
    std::vector<Complex> h(ax.field_size(), Complex(0.2, -0.4));
    const std::vector<Complex> out = hnc_closure(h, h, bond);
    for (const Complex& v : out) CHECK(std::abs(v) < 1e-15);
  }

  SUBCASE("classical limit reproduces the scalar closure nodewise") {
    for (std::size_t i = 0; i < ax.q.count; ++i)
      bond.beta_u[i] = 0.8 * std::exp(-0.3 * ax.q.coord(i) * ax.q.coord(i));
    auto rng = test::rng(89);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    std::vector<Complex> h(ax.field_size()), c(ax.field_size());
    for (std::size_t iq = 0; iq < ax.q.count; ++iq) {
      const double hv = u(rng), cv = u(rng);
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2) {
          h[ax.idx(iq, i1, i2)] = hv;
          c[ax.idx(iq, i1, i2)] = cv;
        }
    }
    const std::vector<Complex> out = hnc_closure(h, c, bond);
    for (std::size_t iq = 0; iq < ax.q.count; ++iq) {
      const double want = std::expm1(h[ax.idx(iq, 0, 0)].real() -
                                     c[ax.idx(iq, 0, 0)].real() - bond.beta_u[iq]);
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2)
          CHECK(std::abs(out[ax.idx(iq, i1, i2)] - want) < 1e-14);
    }
  }

  SUBCASE("imaginary exponents near pi are harmless") {
    std::vector<Complex> h(ax.field_size(), Complex(0.0, 3.1));
    std::vector<Complex> c(ax.field_size(), Complex{});
    const std::vector<Complex> out = hnc_closure(h, c, bond);
    for (const Complex& v : out) {
      CHECK(std::isfinite(v.real()));
      CHECK(std::isfinite(v.imag()));
    }
  }
}

TEST_CASE("picard iteration") {
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);

  SUBCASE("zero interaction converges immediately to zero correlations") {
    PhaseAxes ax = small_axes();
    BondExponent bond;
    bond.axes = ax;
    bond.beta_u.assign(ax.q.count, 0.0);
    CorrelationSet init;
    init.axes = ax;
    init.h.assign(ax.field_size(), Complex{});
    init.c.assign(ax.field_size(), Complex{});
    init.rho1 = rho1_maxwell(0.1, ax.p, sys);
    PicardOptions opts;
    opts.mixing = 1.0;
    const PicardResult res = picard_solve(init, bond, sys, opts);
    CHECK(res.report.converged);
    CHECK(res.report.iterations <= 2);
    for (const Complex& v : res.correlations.h) CHECK(std::abs(v) < 1e-14);
  }

  SUBCASE("classical reduction matches the independent scalar solver") {
    // 1D Lennard-Jones gas, n sigma = 0.1, beta eps = 0.5
    const double sigma = 1.0, n_density = 0.1;
    const ThermalSystem csys(0.5, 1.0, 1.0, 1);
    const LennardJones lj(1.0, sigma);

    PhaseAxes ax;
    ax.q = Axis::symmetric(8.0, 161);
    ax.p = Axis::symmetric(6.0, 5);

    BondExponent bond;
    bond.axes = ax;
    bond.beta_u.resize(ax.q.count);
    for (std::size_t i = 0; i < ax.q.count; ++i) {
      const double r = std::abs(ax.q.coord(i));
      bond.beta_u[i] = r > 0.0 ? csys.beta * lj.eval(r, 0)
                               : std::numeric_limits<double>::infinity();
    }

    CorrelationSet init;
    init.axes = ax;
    init.h.assign(ax.field_size(), Complex{});
    init.c.assign(ax.field_size(), Complex{});
    init.rho1 = rho1_maxwell(n_density, ax.p, csys);

    PicardOptions opts;
    opts.mixing = 0.2;
    opts.tol = 1e-10;
    opts.max_iter = 4000;
    const PicardResult res = picard_solve(init, bond, csys, opts);
    REQUIRE(res.report.converged);

    // momentum independence is preserved exactly
    for (std::size_t iq = 0; iq < ax.q.count; ++iq)
      for (std::size_t i1 = 0; i1 < ax.p.count; ++i1)
        for (std::size_t i2 = 0; i2 < ax.p.count; ++i2) {
          CHECK(std::abs(res.correlations.h[ax.idx(iq, i1, i2)] -
                         res.correlations.h[ax.idx(iq, 0, 0)]) < 1e-12);
          CHECK(std::abs(res.correlations.h[ax.idx(iq, i1, i2)].imag()) < 1e-12);
        }

    // effective density seen through the quadrature
    double n_eff = 0.0;
    for (std::size_t i = 0; i < ax.p.count; ++i) {
      const double w = (i == 0 || i + 1 == ax.p.count) ? 0.5 : 1.0;
      n_eff += w * init.rho1[i];
    }
    n_eff *= ax.p.spacing / (2.0 * kPi * csys.hbar);

    ClassicalHnc oracle(ax.q, bond.beta_u, n_eff);
    REQUIRE(oracle.solve(0.2, 6000, 1e-12));
    for (std::size_t iq = 0; iq < ax.q.count; ++iq)
      CHECK(std::abs(res.correlations.h[ax.idx(iq, 2, 2)].real() - oracle.h[iq]) < 1e-6);

    SUBCASE("asymptote of the direct correlation") {
      const AsymptoteReport rep = asymptote_check(res.correlations, bond);
      // c ~ -beta u on the outer third, within 5% of |beta u| at 3 sigma
      const std::size_t start = ax.q.count - ax.q.count / 3;
      for (std::size_t k = 0; k < rep.q_values.size(); ++k) {
        if (std::abs(rep.q_values[k] - 3.0 * sigma) < 0.6) {
          const double bu = std::abs(csys.beta * lj.eval(rep.q_values[k], 0));
          CHECK(rep.residual_by_q[k] < 0.05 * bu);
        }
      }
      (void)start;
    }

    SUBCASE("tightening the tolerance costs iterations, residuals decay") {
      PicardOptions tight = opts;
      tight.tol = 1e-12;
      const PicardResult res2 = picard_solve(init, bond, csys, tight);
      CHECK(res2.report.iterations > res.report.iterations);
      const auto& r = res2.report.residuals;
      // the envelope decays after burn-in (the raw residual alternates
      // slightly between the two half-updates)
      for (std::size_t i = 50; i + 20 < r.size(); i += 20) CHECK(r[i + 20] < r[i]);
    }
  }

  SUBCASE("a quantum fermi bond keeps its symmetries through the iteration") {
    // momentum window inside the linear-solution validity (beta b stays
    // small); fermion statistics so the dimer phase suppresses rather than
    // amplifies the contact weight
    const ThermalSystem qsys(0.3, 1.0, 1.0, 1);
    const GaussianWell gw(0.4, 0.9);
    PhaseAxes ax;
    ax.q = Axis::symmetric(6.0, 81);
    ax.p = Axis::symmetric(1.5, 9);

    BondExponent bond;
    bond.axes = ax;
    bond.beta_u.resize(ax.q.count);
    for (std::size_t i = 0; i < ax.q.count; ++i)
      bond.beta_u[i] = qsys.beta * gw.eval(std::abs(ax.q.coord(i)), 0);
    bond.w2 = w2_linear_1d(gw, ax, qsys, std::nullopt);
    bond.eta2 = eta2_dimer_field(ax, qsys, Statistics::fermi, qsys.thermal_wavelength());

    CorrelationSet init;
    init.axes = ax;
    init.statistics = Statistics::fermi;
    init.h.assign(ax.field_size(), Complex{});
    init.c.assign(ax.field_size(), Complex{});
    init.rho1 = rho1_maxwell(0.05, ax.p, qsys);

    PicardOptions opts;
    opts.mixing = 0.2;
    opts.max_iter = 4000;
    opts.tol = 1e-12;  // symmetry residuals track the convergence residual
    const PicardResult res = picard_solve(init, bond, qsys, opts);
    REQUIRE(res.report.converged);

    const std::size_t np = ax.p.count;
    for (std::size_t iq = 0; iq < ax.q.count; iq += 5)
      for (std::size_t i1 = 0; i1 < np; ++i1)
        for (std::size_t i2 = 0; i2 < np; ++i2) {
          const Complex a = res.correlations.h[ax.idx(iq, i1, i2)];
          const Complex b = res.correlations.h[ax.idx(iq, np - 1 - i1, np - 1 - i2)];
          CHECK(test::cdist(std::conj(a), b) < 1e-10);
          // exchange symmetry of the pair function
          const Complex ex = res.correlations.h[ax.idx(ax.q.count - 1 - iq, i2, i1)];
          CHECK(test::cdist(a, ex) < 1e-10);
        }
  }

  SUBCASE("a strongly bunched bose bond diverges and is reported, not thrown") {
    const ThermalSystem qsys(0.4, 1.0, 1.0, 1);
    const GaussianWell gw(0.6, 0.9);
    PhaseAxes ax;
    ax.q = Axis::symmetric(6.0, 61);
    ax.p = Axis::symmetric(1.5, 5);
    BondExponent bond;
    bond.axes = ax;
    bond.beta_u.resize(ax.q.count);
    for (std::size_t i = 0; i < ax.q.count; ++i)
      bond.beta_u[i] = qsys.beta * gw.eval(std::abs(ax.q.coord(i)), 0);
    bond.w2 = w2_linear_1d(gw, ax, qsys, std::nullopt);
    bond.eta2 =
        eta2_dimer_field(ax, qsys, Statistics::bose, 3.0 * qsys.thermal_wavelength());
    // bosonic contact bunching at this coupling has no stable HNC fixed
    // point; the solver must flag it rather than throw
    CorrelationSet init;
    init.axes = ax;
    init.h.assign(ax.field_size(), Complex{});
    init.c.assign(ax.field_size(), Complex{});
    init.rho1 = rho1_maxwell(0.05, ax.p, qsys);
    PicardOptions opts;
    opts.mixing = 0.2;
    opts.max_iter = 200;
    const PicardResult res = picard_solve(init, bond, qsys, opts);
    CHECK(!res.report.converged);
    CHECK(!res.report.residuals.empty());
  }
}
