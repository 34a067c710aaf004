#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "qoz/grid.hpp"
#include "qoz/grid_io.hpp"
#include "qoz/hamiltonian.hpp"
#include "qoz/potentials.hpp"

using namespace qoz;

namespace {

// independent oracle for the LJ minimum: golden-section search on u(r)
double golden_minimize(const std::function<double(double)>& f, double a, double b) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  for (int it = 0; it < 200; ++it) {
    if (f(c) < f(d))
      b = d;
    else
      a = c;
    c = b - phi * (b - a);
    d = a + phi * (b - a);
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST_CASE("classical hamiltonian: one particle") {
  const ThermalSystem sys(2.0, 1.0, 1.0, 1);
  const auto trap = std::make_shared<Harmonic>(1.0, 1.5);
  const PotentialModel model{trap, nullptr};

  CHECK(classical_hamiltonian(Configuration::single_1d(0.0, 0.0), model, sys).value ==
        doctest::Approx(0.0));

  // beta p^2 / 2m = 2  ->  kinetic = 2 / beta
  const double p = std::sqrt(2.0 * 2.0 * sys.mass / sys.beta);
  const auto h = classical_hamiltonian(Configuration::single_1d(0.0, p),
                                       PotentialModel{}, sys);
  CHECK(h.value == doctest::Approx(2.0 / sys.beta));
}

TEST_CASE("classical hamiltonian: LJ pair minimum matches 1D minimization oracle") {
  const double eps = 1.7, sigma = 0.9;
  const auto lj = std::make_shared<LennardJones>(eps, sigma);
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);
  const PotentialModel model{nullptr, lj};

  const double r_oracle =
      golden_minimize([&](double r) { return lj->eval(r, 0); }, 0.8 * sigma, 2.0 * sigma);
  // a smooth minimum is locatable only to sqrt(machine eps) in position
  CHECK(r_oracle == doctest::Approx(lj->r_min()).epsilon(1e-7));

  const Configuration pairc({Vec(0.0), Vec(r_oracle)}, {Vec(0.0), Vec(0.0)});
  CHECK(classical_hamiltonian(pairc, model, sys).value == doctest::Approx(-eps).epsilon(1e-12));
}

TEST_CASE("classical hamiltonian: overlap flagged as infinity") {
  const auto lj = std::make_shared<LennardJones>(1.0, 1.0);
  const ThermalSystem sys(1.0, 1.0, 1.0, 1);
  const Configuration overlap({Vec(0.5), Vec(0.5)}, {Vec(0.0), Vec(0.0)});
  const auto h = classical_hamiltonian(overlap, PotentialModel{nullptr, lj}, sys);
  CHECK(h.overlap);
  CHECK(std::isinf(h.value));
}

TEST_CASE("classical hamiltonian invariances") {
  auto rng = test::rng();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto lj = std::make_shared<LennardJones>(0.7, 1.1);
  const auto trap = std::make_shared<Harmonic>(1.0, 0.8);
  const ThermalSystem sys(1.0, 1.0, 1.0, 3);

  std::vector<Vec> q, p;
  for (int j = 0; j < 4; ++j) {
    q.emplace_back(3.0 * u(rng), 3.0 * u(rng), 3.0 * u(rng));
    p.emplace_back(u(rng), u(rng), u(rng));
  }
  const Configuration c(q, p);

  SUBCASE("relabeling") {
    std::vector<Vec> q2{q[2], q[0], q[3], q[1]}, p2{p[2], p[0], p[3], p[1]};
    const PotentialModel model{trap, lj};
    CHECK(classical_hamiltonian(Configuration(q2, p2), model, sys).value ==
          doctest::Approx(classical_hamiltonian(c, model, sys).value).epsilon(1e-13));
  }
  SUBCASE("global translation with pair potential only") {
    const Vec shift(0.4, -1.2, 2.2);
    std::vector<Vec> qs;
    for (const Vec& v : q) qs.push_back(v + shift);
    const PotentialModel model{nullptr, lj};
    CHECK(classical_hamiltonian(Configuration(qs, p), model, sys).value ==
          doctest::Approx(classical_hamiltonian(c, model, sys).value).epsilon(1e-13));
  }
}

TEST_CASE("LJ pair derivatives") {
  const double eps = 1.3, sigma = 0.8;
  CHECK(lj_pair_derivatives(sigma, 0, eps, sigma) == doctest::Approx(0.0));
  CHECK(lj_pair_derivatives(std::pow(2.0, 1.0 / 6.0) * sigma, 1, eps, sigma) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(lj_pair_derivatives(0.0, 0, eps, sigma), std::domain_error);
  CHECK_THROWS_AS(lj_pair_derivatives(-1.0, 2, eps, sigma), std::domain_error);

  // curvature against the finite-difference oracle at 1.5 sigma
  const auto u0 = [&](double r) { return lj_pair_derivatives(r, 0, eps, sigma); };
  const double fd = test::central_diff_rich(u0, 1.5 * sigma, 1e-2, 2);
  CHECK(test::rel_err(lj_pair_derivatives(1.5 * sigma, 2, eps, sigma), fd) < 1e-8);
}

TEST_CASE("SHO singlet derivatives") {
  const double m = 1.2, w = 2.5;
  CHECK(sho_singlet_derivatives(0.0, 0, m, w) == doctest::Approx(0.0));
  CHECK(sho_singlet_derivatives(0.37, 2, m, w) == doctest::Approx(m * w * w));
  CHECK(sho_singlet_derivatives(-2.1, 2, m, w) == doctest::Approx(m * w * w));
  CHECK(sho_singlet_derivatives(1.0, 3, m, w) == doctest::Approx(0.0));
  CHECK(sho_singlet_derivatives(1.0, 4, m, w) == doctest::Approx(0.0));
}

TEST_CASE("derivative oracles: all models match finite differences at random points") {
  auto rng = test::rng(7);
  const LennardJones lj(0.9, 1.05);
  const GaussianWell gw(1.4, 0.8);
  const Harmonic ho(1.1, 1.9);
  const std::vector<const RadialPotential*> models{&lj, &gw, &ho};
  const std::vector<std::pair<double, double>> ranges{{0.95, 2.8}, {0.1, 2.5}, {-2.0, 2.0}};

  for (std::size_t im = 0; im < models.size(); ++im) {
    std::uniform_real_distribution<double> dist(ranges[im].first, ranges[im].second);
    for (int trial = 0; trial < 20; ++trial) {
      double r = dist(rng);
      if (im == 0 && r < 1.0) r += 1.0;  // keep the LJ stencil off the core
      // chain check: each order against a first difference of the previous
      // analytic order. Induction from order 0 validates the whole ladder
      // without the roundoff blowup of bare fourth differences.
      for (int order = 1; order <= 4; ++order) {
        const auto prev = [&](double x) { return models[im]->eval(x, order - 1); };
        const double fd = test::central_diff_rich(prev, r, 1e-2, 1);
        const double an = models[im]->eval(r, order);
        if (std::abs(an) < 1e-8 && std::abs(fd) < 1e-4) continue;  // both ~ 0
        CHECK(test::rel_err(an, fd) < 1e-6);
      }
      // and the curvature straight from values
      const auto f0 = [&](double x) { return models[im]->eval(x, 0); };
      const double fd2 = test::central_diff_rich(f0, r, 1e-2, 2);
      const double an2 = models[im]->eval(r, 2);
      if (!(std::abs(an2) < 1e-8 && std::abs(fd2) < 1e-4))
        CHECK(test::rel_err(an2, fd2) < 1e-6);
    }
  }
}

TEST_CASE("squared-argument derivatives are consistent with radial ones") {
  // f'(r) = 2 r F'(s), f''(r) = 4 r^2 F''(s) + 2 F'(s) at s = r^2
  auto rng = test::rng(11);
  std::uniform_real_distribution<double> dist(0.8, 2.2);
  const LennardJones lj(1.2, 0.95);
  const GaussianWell gw(0.7, 1.1);
  const Harmonic ho(1.0, 1.3);
  const std::vector<const RadialPotential*> pots{&lj, &gw, &ho};
  for (const RadialPotential* u : pots) {
    for (int trial = 0; trial < 10; ++trial) {
      const double r = dist(rng), s = r * r;
      CHECK(test::rel_err(2.0 * r * u->eval_s(s, 1), u->eval(r, 1)) < 1e-12);
      CHECK(test::rel_err(4.0 * s * u->eval_s(s, 2) + 2.0 * u->eval_s(s, 1),
                          u->eval(r, 2)) < 1e-11);
    }
  }
}

TEST_CASE("grid interpolation") {
  SUBCASE("node identity and midpoint mean in 1D") {
    ComplexGrid g({Axis(0.0, 0.5, 5)}, {Complex(1, 0), Complex(2, 1), Complex(4, -1),
                                        Complex(0, 0), Complex(3, 2)});
    CHECK(test::cdist(g.interpolate(std::array{1.0}), Complex(4, -1)) < 1e-15);
    CHECK(test::cdist(g.interpolate(std::array{0.25}), Complex(1.5, 0.5)) < 1e-15);
  }

  SUBCASE("linear function reproduced exactly in 1D") {
    const Axis ax(-1.0, 0.2, 11);
    std::vector<Complex> data(ax.count);
    for (std::size_t i = 0; i < ax.count; ++i) data[i] = 0.7 + 1.3 * ax.coord(i);
    const ComplexGrid g({ax}, data);
    auto rng = test::rng(3);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int t = 0; t < 25; ++t) {
      const double x = dist(rng);
      CHECK(test::cdist(g.interpolate(std::array{x}), Complex(0.7 + 1.3 * x, 0.0)) < 1e-14);
    }
  }

  SUBCASE("multilinear function reproduced exactly in 3D") {
    const Axis ax(0.0, 0.25, 5), ay(-1.0, 0.5, 4), az(2.0, 0.1, 3);
    auto f = [](double x, double y, double z) {
      return 0.3 - x + 2.0 * y + 0.5 * z + 0.7 * x * y - 0.2 * x * z + 1.1 * y * z +
             0.4 * x * y * z;
    };
    ComplexGrid g = ComplexGrid::zeros({ax, ay, az});
    for (std::size_t i = 0; i < ax.count; ++i)
      for (std::size_t j = 0; j < ay.count; ++j)
        for (std::size_t k = 0; k < az.count; ++k)
          g.at3(i, j, k) = f(ax.coord(i), ay.coord(j), az.coord(k));
    auto rng = test::rng(5);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int t = 0; t < 25; ++t) {
      const double x = ux(rng), y = -1.0 + 1.5 * ux(rng), z = 2.0 + 0.2 * ux(rng);
      CHECK(test::cdist(g.interpolate(std::array{x, y, z}), Complex(f(x, y, z), 0.0)) <
            1e-13);
    }
  }

  SUBCASE("out of bounds carries the offending axis") {
    ComplexGrid g = ComplexGrid::zeros({Axis(0.0, 1.0, 4), Axis(0.0, 1.0, 4)});
    try {
      g.interpolate(std::array{1.0, 5.0});
      FAIL("expected GridBoundsError");
    } catch (const GridBoundsError& e) {
      CHECK(e.axis == 1);
      CHECK(e.value == doctest::Approx(5.0));
    }
  }
}

TEST_CASE("qozgrid round trip and csv") {
  const std::filesystem::path tmp =
      std::filesystem::temp_directory_path() / "qoz_test_grid.bin";
  auto rng = test::rng(17);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);

  ComplexGrid g = ComplexGrid::zeros({Axis(-1.0, 0.25, 5), Axis(0.0, 0.5, 3)});
  for (Complex& z : g.data()) z = Complex(dist(rng), dist(rng));

  write_qozgrid(tmp.string(), g);
  const ComplexGrid back = read_qozgrid(tmp.string());
  REQUIRE(back.rank() == 2);
  CHECK(back.axis(0).origin == g.axis(0).origin);
  CHECK(back.axis(1).count == g.axis(1).count);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(back.data()[i] == g.data()[i]);  // bit-exact

  // header layout: magic at byte 0, axis records start at byte 64
  std::ifstream is(tmp, std::ios::binary);
  char magic[8];
  is.read(magic, 8);
  CHECK(std::string(magic, 8) == "QOZGRID1");

  std::ostringstream csv;
  write_grid_csv(csv, g, {"q", "p"});
  const std::string text = csv.str();
  CHECK(text.substr(0, text.find('\n')) == "q,p,re,im");
  // 5*3 nodes + header
  CHECK(std::count(text.begin(), text.end(), '\n') == 16);

  std::filesystem::remove(tmp);
}

TEST_CASE("thermal system validation") {
  CHECK_THROWS_AS(ThermalSystem(-1.0, 1.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ThermalSystem(1.0, 0.0, 1.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(ThermalSystem(1.0, 1.0, 1.0, 4), std::invalid_argument);
  const ThermalSystem sys(2.0, 0.5, 2.0, 3);
  CHECK(sys.thermal_wavelength() == doctest::Approx(0.5));
}
