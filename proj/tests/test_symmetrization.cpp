#include <cmath>
#include <numeric>

#include "doctest.h"
#include "helpers.hpp"
#include "qoz/symmetrization.hpp"

using namespace qoz;

namespace {

const ThermalSystem kSys(1.0, 1.0, 1.0, 1);

Configuration random_config_1d(std::mt19937_64& rng, std::size_t n, double spread,
                               double pmax) {
  std::uniform_real_distribution<double> uq(-spread, spread), up(-pmax, pmax);
  std::vector<Vec> q, p;
  for (std::size_t j = 0; j < n; ++j) {
    q.emplace_back(uq(rng));
    p.emplace_back(up(rng));
  }
  return Configuration(q, p);
}

// the explicit trimer form as printed for the cycle through (j,k,l):
// exp[(p_l - p_j).q_j / i hbar] exp[(p_j - p_k).q_k / i hbar]
// exp[(p_k - p_l).q_l / i hbar]
Complex trimer_explicit(std::size_t j, std::size_t k, std::size_t l,
                        const Configuration& c, const ThermalSystem& sys) {
  const double x = (c.momenta[l] - c.momenta[j]).dot(c.positions[j]) +
                   (c.momenta[j] - c.momenta[k]).dot(c.positions[k]) +
                   (c.momenta[k] - c.momenta[l]).dot(c.positions[l]);
  return Complex(std::cos(-x / sys.hbar), std::sin(-x / sys.hbar));
}

Complex eta2_sum(const Configuration& c, Statistics s) {
  Complex acc{};
  for (std::size_t j = 0; j < c.size(); ++j)
    for (std::size_t k = j + 1; k < c.size(); ++k)
      acc += dimer_eta(c.momenta[j] - c.momenta[k], c.positions[j] - c.positions[k],
                       kSys, s);
  return acc;
}

}  // namespace

TEST_CASE("dimer phase factor") {
  CHECK(test::cdist(dimer_eta(Vec(0.0), Vec(1.0), kSys, Statistics::bose),
                    Complex(1.0, 0.0)) < 1e-15);
  CHECK(test::cdist(dimer_eta(Vec(0.0), Vec(1.0), kSys, Statistics::fermi),
                    Complex(-1.0, 0.0)) < 1e-15);
  // p q = pi hbar: half period
  CHECK(test::cdist(dimer_eta(Vec(kPi), Vec(1.0), kSys, Statistics::bose),
                    Complex(-1.0, 0.0)) < 1e-12);

  auto rng = test::rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 30; ++t)
    CHECK(std::abs(std::abs(dimer_eta(Vec(u(rng)), Vec(u(rng)), kSys,
                                      Statistics::fermi))) == doctest::Approx(1.0));
}

TEST_CASE("loop factors") {
  auto rng = test::rng(4);
  const Configuration c = random_config_1d(rng, 5, 2.0, 3.0);

  SUBCASE("two-index loop reduces to the dimer") {
    for (std::size_t j = 0; j < 5; ++j)
      for (std::size_t k = j + 1; k < 5; ++k) {
        const std::array<std::size_t, 2> idx{j, k};
        const Complex expect = dimer_eta(c.momenta[j] - c.momenta[k],
                                         c.positions[j] - c.positions[k], kSys,
                                         Statistics::fermi);
        CHECK(test::cdist(loop_eta(idx, c, kSys, Statistics::fermi), expect) < 1e-14);
      }
  }

  SUBCASE("three-index loop matches the explicit trimer form") {
    // the generic product with reversed ordering traverses the same cycle
    const std::array<std::size_t, 3> rev{3, 1, 0};
    CHECK(test::cdist(loop_eta(rev, c, kSys, Statistics::bose),
                      trimer_explicit(0, 1, 3, c, kSys)) < 1e-14);
    // and the two printed routes sum identically over both cycles of a triple
    const std::array<std::size_t, 3> fwd{0, 1, 3};
    const Complex sum_generic = loop_eta(fwd, c, kSys, Statistics::bose) +
                                loop_eta(rev, c, kSys, Statistics::bose);
    const Complex sum_explicit = trimer_explicit(0, 1, 3, c, kSys) +
                                 trimer_explicit(0, 3, 1, c, kSys);
    CHECK(test::cdist(sum_generic, sum_explicit) < 1e-14);
  }

  SUBCASE("equal momenta collapse to the parity factor") {
    std::vector<Vec> q = c.positions, p(5, Vec(1.7));
    const Configuration ceq(q, p);
    const std::array<std::size_t, 3> i3{0, 2, 4};
    const std::array<std::size_t, 4> i4{0, 1, 2, 4};
    CHECK(test::cdist(loop_eta(i3, ceq, kSys, Statistics::fermi), Complex(1, 0)) < 1e-14);
    CHECK(test::cdist(loop_eta(i4, ceq, kSys, Statistics::fermi), Complex(-1, 0)) < 1e-14);
    CHECK(test::cdist(loop_eta(i4, ceq, kSys, Statistics::bose), Complex(1, 0)) < 1e-14);
  }

  SUBCASE("repeated index is rejected; unimodularity holds") {
    const std::array<std::size_t, 3> bad{1, 2, 1};
    CHECK_THROWS_AS(loop_eta(bad, c, kSys, Statistics::bose), std::invalid_argument);
    const std::array<std::size_t, 4> idx{4, 0, 2, 3};
    CHECK(std::abs(loop_eta(idx, c, kSys, Statistics::fermi)) == doctest::Approx(1.0));
  }
}

TEST_CASE("brute force equals the loop expansion exactly for N = 3") {
  auto rng = test::rng(12);
  for (int t = 0; t < 50; ++t) {
    const Configuration c = random_config_1d(rng, 3, 1.5, 2.5);
    for (Statistics s : {Statistics::bose, Statistics::fermi}) {
      const LoopExpansion le = loop_sums(c, kSys, s, {.lmax = 3});
      const Complex expansion = 1.0 + le.eta(2) + le.eta(3);
      CHECK(test::cdist(eta_bruteforce(c, kSys, s), expansion) < 1e-13);
    }
  }
}

TEST_CASE("brute force small cases") {
  auto rng = test::rng(13);
  const Configuration c1({Vec(0.3)}, {Vec(-1.0)});
  CHECK(test::cdist(eta_bruteforce(c1, kSys, Statistics::fermi), Complex(1, 0)) < 1e-15);

  const Configuration c2 = random_config_1d(rng, 2, 1.0, 2.0);
  const Complex d = dimer_eta(c2.momenta[0] - c2.momenta[1],
                              c2.positions[0] - c2.positions[1], kSys, Statistics::bose);
  CHECK(test::cdist(eta_bruteforce(c2, kSys, Statistics::bose), 1.0 + d) < 1e-14);

  CHECK_THROWS_AS(eta_bruteforce(random_config_1d(rng, 9, 1.0, 1.0), kSys,
                                 Statistics::bose),
                  std::invalid_argument);
}

TEST_CASE("fermion parity enters per loop order: N = 3 parity classes") {
  auto rng = test::rng(14);
  for (int t = 0; t < 10; ++t) {
    const Configuration c = random_config_1d(rng, 3, 1.2, 2.0);
    const Complex bb = eta_bruteforce(c, kSys, Statistics::bose);
    const Complex bf = eta_bruteforce(c, kSys, Statistics::fermi);
    const LoopExpansion le = loop_sums(c, kSys, Statistics::bose, {.lmax = 3});
    // transpositions flip sign between statistics, three-cycles do not
    CHECK(test::cdist(0.5 * (bb - bf), le.eta(2)) < 1e-13);
    CHECK(test::cdist(0.5 * (bb + bf) - 1.0, le.eta(3)) < 1e-13);
  }
}

TEST_CASE("oscillatory suppression of spread-out configurations") {
  auto rng = test::rng(15);
  // many thermal wavelengths apart with distinct momenta: the pair sum stays
  // far below its coherent bound (here 10 pairs)
  Complex mean{};
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const Configuration c = random_config_1d(rng, 5, 40.0, 4.0);
    const LoopExpansion le = loop_sums(c, kSys, Statistics::bose, {.lmax = 3});
    CHECK(std::abs(le.eta(2)) < 0.75 * 10.0);  // well below the coherent bound
    mean += le.eta(2) / double(trials);
  }
  CHECK(std::abs(mean) < 0.15 * 10.0);
}

TEST_CASE("extensivity under composition with an active cutoff") {
  auto rng = test::rng(16);
  const Configuration a = random_config_1d(rng, 4, 1.0, 2.0);
  Configuration b = random_config_1d(rng, 4, 1.0, 2.0);
  for (Vec& q : b.positions) q = q + Vec(500.0);  // far beyond any cutoff window

  std::vector<Vec> qu = a.positions, pu = a.momenta;
  qu.insert(qu.end(), b.positions.begin(), b.positions.end());
  pu.insert(pu.end(), b.momenta.begin(), b.momenta.end());
  const Configuration uni(qu, pu);

  const LoopSumOptions opts{.lmax = 4, .cutoff_radius = 20.0};
  for (Statistics s : {Statistics::bose, Statistics::fermi}) {
    const LoopExpansion la = loop_sums(a, kSys, s, opts);
    const LoopExpansion lb = loop_sums(b, kSys, s, opts);
    const LoopExpansion lu = loop_sums(uni, kSys, s, opts);
    for (int l = 2; l <= 4; ++l)
      CHECK(test::cdist(lu.eta(l), la.eta(l) + lb.eta(l)) < 1e-12);
  }
}

TEST_CASE("double-dimer identity") {
  auto rng = test::rng(18);

  SUBCASE("exact equality of the two evaluations for N = 5") {
    for (int t = 0; t < 20; ++t) {
      const Configuration c = random_config_1d(rng, 5, 1.5, 2.0);
      for (Statistics s : {Statistics::bose, Statistics::fermi}) {
        const DoubleDimerCheck chk = double_dimer_identity_check(c, kSys, s);
        CHECK(test::cdist(chk.lhs, chk.rhs) < 1e-12);
      }
    }
  }

  SUBCASE("minimal N = 4 evaluates cleanly") {
    const Configuration c = random_config_1d(rng, 4, 1.0, 1.5);
    const DoubleDimerCheck chk = double_dimer_identity_check(c, kSys, Statistics::bose);
    CHECK(test::cdist(chk.lhs, chk.rhs) < 1e-13);
    CHECK(std::abs(chk.lhs) > 0.0);
  }

  SUBCASE("leading term grows two powers of N faster than the corrections") {
    // compact-loop ensemble: coherent dimer blocks (zero relative momentum)
    // scattered over a huge box, so cross-block phases average out and the
    // dimer sum is extensive. Ensemble means then isolate the N^2 leading
    // term from the O(N) repeated-index corrections.
    std::vector<double> ln_n, ln_lead, ln_corr;
    for (std::size_t n = 4; n <= 8; ++n) {
      std::mt19937_64 erng(7);
      std::uniform_real_distribution<double> ubox(0.0, 1000.0 * double(n));
      std::uniform_real_distribution<double> umom(3.0, 9.0);
      std::uniform_real_distribution<double> usep(0.3, 0.9);
      Complex lead{}, corr{};
      const int trials = 8000;
      for (int t = 0; t < trials; ++t) {
        std::vector<Vec> q, p;
        for (std::size_t b = 0; 2 * b + 1 < n; ++b) {
          const double x = ubox(erng), pb = umom(erng) * (b % 2 ? 1.0 : -1.0);
          q.emplace_back(x);
          q.emplace_back(x + usep(erng));
          p.emplace_back(pb);
          p.emplace_back(pb);
        }
        if (q.size() < n) {  // odd N: one stray particle
          q.emplace_back(ubox(erng));
          p.emplace_back(umom(erng));
        }
        const Configuration c(q, p);
        const DoubleDimerCheck chk =
            double_dimer_identity_check(c, kSys, Statistics::bose);
        const Complex eta2 = eta2_sum(c, Statistics::bose);
        lead += 0.5 * eta2 * eta2 / double(trials);
        corr += (-0.5 * chk.correction_three_index + 0.25 * chk.correction_pair_sq) /
                double(trials);
      }
      ln_n.push_back(std::log(double(n)));
      ln_lead.push_back(std::log(std::abs(lead)));
      ln_corr.push_back(std::log(std::abs(corr)));
    }
    auto slope = [&](const std::vector<double>& y) {
      double sx = 0, sy = 0, sxx = 0, sxy = 0;
      const double n = double(ln_n.size());
      for (std::size_t i = 0; i < ln_n.size(); ++i) {
        sx += ln_n[i];
        sy += y[i];
        sxx += ln_n[i] * ln_n[i];
        sxy += ln_n[i] * y[i];
      }
      return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    CHECK(slope(ln_lead) == doctest::Approx(2.0).epsilon(0.15));
    CHECK(slope(ln_corr) == doctest::Approx(1.0).epsilon(0.3));
  }
}

TEST_CASE("brute force equals dimers + trimers + quads + double dimers for N = 4") {
  auto rng = test::rng(19);
  for (int t = 0; t < 20; ++t) {
    const Configuration c = random_config_1d(rng, 4, 1.2, 2.0);
    for (Statistics s : {Statistics::bose, Statistics::fermi}) {
      const LoopExpansion le = loop_sums(c, kSys, s, {.lmax = 4});
      const DoubleDimerCheck dd = double_dimer_identity_check(c, kSys, s);
      const Complex expansion = 1.0 + le.eta(2) + le.eta(3) + le.eta(4) + dd.lhs;
      CHECK(test::cdist(eta_bruteforce(c, kSys, s), expansion) < 1e-12);
    }
  }
}

TEST_CASE("exponential resummation error is measured, not hidden") {
  auto rng = test::rng(20);
  const Configuration c = random_config_1d(rng, 5, 1.0, 1.5);
  const LoopExpansion le = loop_sums(c, kSys, Statistics::bose, {.lmax = 4});
  const Complex brute = eta_bruteforce(c, kSys, Statistics::bose);
  // the product-of-exponentials form is an approximation beyond the dimer
  // level; it must at least stay within the crude bound set by the exact sum
  const double err = std::abs(brute - le.total_exponential);
  MESSAGE("exponential resummation deviation at N=5: ", err);
  CHECK(std::isfinite(err));
}

TEST_CASE("permutation counting") {
  using P = std::pair<int, int>;
  {
    const std::array<P, 1> spec{P{3, 1}};
    CHECK(permutation_count(spec, 3) == 2);
  }
  {
    const std::array<P, 1> spec{P{2, 2}};
    CHECK(permutation_count(spec, 4) == 3);
  }
  {
    const std::array<P, 2> spec{P{1, 2}, P{2, 1}};
    CHECK(permutation_count(spec, 4) == 6);  // the six transpositions of S4
  }
  {
    const std::array<P, 1> spec{P{2, 1}};
    CHECK_THROWS_AS(permutation_count(spec, 4), std::invalid_argument);
  }

  SUBCASE("loop contents of S_n sum to n! for n <= 6") {
    // enumerate partitions of n as loop contents
    for (int n = 1; n <= 6; ++n) {
      std::uint64_t total = 0;
      std::vector<P> spec;
      std::function<void(int, int)> recurse = [&](int remaining, int max_part) {
        if (remaining == 0) {
          total += permutation_count(spec, n);
          return;
        }
        for (int part = std::min(remaining, max_part); part >= 1; --part) {
          int count = 0;
          // merge equal parts into (l, m) entries
          if (!spec.empty() && spec.back().first == part) continue;
          for (int m = 1; m * part <= remaining; ++m) {
            count = m;
            spec.emplace_back(part, m);
            recurse(remaining - m * part, part - 1);
            spec.pop_back();
          }
          (void)count;
        }
      };
      recurse(n, n);
      std::uint64_t nf = 1;
      for (int i = 2; i <= n; ++i) nf *= std::uint64_t(i);
      CHECK(total == nf);
    }
  }
}
