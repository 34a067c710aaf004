#include "qoz/symmetrization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qoz {
namespace {

double sign_of(Statistics s) { return s == Statistics::bose ? 1.0 : -1.0; }

Complex phase(double x) { return Complex(std::cos(x), std::sin(x)); }

// parity of a permutation from its cycle decomposition
int permutation_parity(std::span<const std::size_t> perm) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n, false);
  int transpositions = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::size_t len = 0, j = i;
    while (!seen[j]) {
      seen[j] = true;
      j = perm[j];
      ++len;
    }
    transpositions += static_cast<int>(len) - 1;
  }
  return transpositions % 2 == 0 ? 1 : -1;
}

}  // namespace

Complex dimer_eta(const Vec& p_jk, const Vec& q_jk, const ThermalSystem& sys,
                  Statistics stats) {
  return sign_of(stats) * phase(p_jk.dot(q_jk) / sys.hbar);
}

Complex loop_eta(std::span<const std::size_t> indices, const Configuration& config,
                 const ThermalSystem& sys, Statistics stats) {
  const std::size_t l = indices.size();
  if (l < 2) throw std::invalid_argument("loop_eta: need at least two indices");
  {
    std::set<std::size_t> uniq(indices.begin(), indices.end());
    if (uniq.size() != l) throw std::invalid_argument("loop_eta: repeated index");
  }
  // exponent of e^{X / i hbar} with the momenta advanced around the cycle
  double x = 0.0;
  for (std::size_t k = 0; k < l; ++k) {
    const std::size_t j = indices[k];
    const std::size_t jn = indices[(k + 1) % l];
    x += (config.momenta[jn] - config.momenta[j]).dot(config.positions[j]);
  }
  const double par = (stats == Statistics::fermi && l % 2 == 0) ? -1.0 : 1.0;
  return par * phase(-x / sys.hbar);
}

namespace {

// all distinct cycles on a sorted subset: first element pinned, remaining
// (l-1)! orderings each give a different cycle
template <typename Fn>
void for_each_cycle(std::span<const std::size_t> subset, const Fn& fn) {
  std::vector<std::size_t> rest(subset.begin() + 1, subset.end());
  std::sort(rest.begin(), rest.end());
  do {
    std::vector<std::size_t> cycle;
    cycle.reserve(subset.size());
    cycle.push_back(subset[0]);
    cycle.insert(cycle.end(), rest.begin(), rest.end());
    fn(cycle);
  } while (std::next_permutation(rest.begin(), rest.end()));
}

template <typename Fn>
void for_each_subset(std::size_t n, std::size_t l, const Fn& fn) {
  std::vector<std::size_t> idx(l);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    // advance combination
    std::size_t i = l;
    while (i-- > 0) {
      if (idx[i] != i + n - l) {
        ++idx[i];
        for (std::size_t j = i + 1; j < l; ++j) idx[j] = idx[j - 1] + 1;
        break;
      }
      if (i == 0) return;
    }
  }
}

}  // namespace

LoopExpansion loop_sums(const Configuration& config, const ThermalSystem& sys,
                        Statistics stats, const LoopSumOptions& opts) {
  if (opts.lmax < 2 || opts.lmax > 4)
    throw std::invalid_argument("loop_sums: supported loop orders are 2..4");
  const std::size_t n = config.size();
  const double cutoff =
      opts.cutoff_radius > 0.0 ? opts.cutoff_radius * sys.thermal_wavelength() : 0.0;

  auto edge_lengths_ok = [&](const std::vector<std::size_t>& cycle, double& damp) {
    damp = 1.0;
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      const Vec d = config.positions[cycle[k]] -
                    config.positions[cycle[(k + 1) % cycle.size()]];
      const double r = d.norm();
      if (cutoff > 0.0 && r > cutoff) return false;
      if (opts.damping) damp *= std::exp(-(r * r) / (opts.damping_scale * opts.damping_scale));
    }
    return true;
  };

  LoopExpansion out;
  out.statistics = stats;
  out.loop_sums.assign(static_cast<std::size_t>(opts.lmax - 1), Complex{});
  for (int l = 2; l <= opts.lmax; ++l) {
    if (static_cast<std::size_t>(l) > n) break;
    Complex acc{};
    for_each_subset(n, static_cast<std::size_t>(l), [&](const std::vector<std::size_t>& subset) {
      for_each_cycle(subset, [&](const std::vector<std::size_t>& cycle) {
        double damp;
        if (!edge_lengths_ok(cycle, damp)) return;
        acc += damp * loop_eta(cycle, config, sys, stats);
      });
    });
    out.loop_sums[static_cast<std::size_t>(l - 2)] = acc;
  }
  out.total_exponential = Complex{1.0, 0.0};
  for (const Complex& s : out.loop_sums) out.total_exponential *= std::exp(s);
  return out;
}

Complex eta_bruteforce(const Configuration& config, const ThermalSystem& sys,
                       Statistics stats) {
  const std::size_t n = config.size();
  if (n > 8) throw std::invalid_argument("eta_bruteforce: N > 8 refused (factorial cost)");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);

  const double sgn = sign_of(stats);
  Complex acc{};
  do {
    double x = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      x += (config.momenta[perm[j]] - config.momenta[j]).dot(config.positions[j]);
    const int par = permutation_parity(perm);
    const double w = (par == 1) ? 1.0 : sgn;  // (+-1)^parity
    acc += w * phase(-x / sys.hbar);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

DoubleDimerCheck double_dimer_identity_check(const Configuration& config,
                                             const ThermalSystem& sys, Statistics stats) {
  const std::size_t n = config.size();
  if (n < 4) throw std::invalid_argument("double_dimer_identity_check: need N >= 4");

  auto eta = [&](std::size_t j, std::size_t k) {
    return dimer_eta(config.momenta[j] - config.momenta[k],
                     config.positions[j] - config.positions[k], sys, stats);
  };

  DoubleDimerCheck out{};
  // each unordered pair of disjoint dimers once
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k)
      for (std::size_t l = j; l < n; ++l)
        for (std::size_t m = l + 1; m < n; ++m) {
          if (std::make_pair(l, m) <= std::make_pair(j, k)) continue;
          if (l == j || l == k || m == j || m == k) continue;
          out.lhs += eta(j, k) * eta(l, m);
        }

  Complex eta2{};
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = j + 1; k < n; ++k) eta2 += eta(j, k);

  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k) {
      if (k == j) continue;
      const Complex ejk = eta(j, k);
      out.correction_pair_sq += ejk * ejk;
      for (std::size_t l = 0; l < n; ++l) {
        if (l == j) continue;
        out.correction_three_index += ejk * eta(j, l);
      }
    }

  out.rhs = 0.5 * eta2 * eta2 - 0.5 * out.correction_three_index +
            0.25 * out.correction_pair_sq;
  return out;
}

std::uint64_t permutation_count(std::span<const std::pair<int, int>> loop_spec, int n) {
  if (n < 1 || n > 20)
    throw std::invalid_argument("permutation_count: n must be in 1..20");
  long long total = 0;
  std::set<int> seen;
  for (const auto& [l, m] : loop_spec) {
    if (l < 1 || m < 0) throw std::invalid_argument("permutation_count: bad loop spec entry");
    if (!seen.insert(l).second)
      throw std::invalid_argument("permutation_count: duplicate loop length");
    total += static_cast<long long>(l) * m;
  }
  if (total != n)
    throw std::invalid_argument("permutation_count: loop content does not sum to n");

  std::uint64_t numer = 1;
  for (int i = 2; i <= n; ++i) numer *= static_cast<std::uint64_t>(i);
  std::uint64_t denom = 1;
  for (const auto& [l, m] : loop_spec) {
    for (int i = 0; i < m; ++i) denom *= static_cast<std::uint64_t>(l);
    for (int i = 2; i <= m; ++i) denom *= static_cast<std::uint64_t>(i);
  }
  return numer / denom;
}

}  // namespace qoz
