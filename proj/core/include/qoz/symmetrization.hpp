#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qoz/types.hpp"

namespace qoz {

enum class Statistics { bose, fermi };

/// Single-transposition phase factor, +-e^{+i p_jk . q_jk / hbar};
/// minus for fermions.
Complex dimer_eta(const Vec& p_jk, const Vec& q_jk, const ThermalSystem& sys,
                  Statistics stats);

/// Phase factor of one specific cyclic loop j1 -> j2 -> ... -> jl -> j1
/// over the configuration, including the (+-1)^(l-1) parity of the
/// transposition chain.
Complex loop_eta(std::span<const std::size_t> indices, const Configuration& config,
                 const ThermalSystem& sys, Statistics stats);

struct LoopSumOptions {
  int lmax = 4;
  /// Pairs separated by more than cutoff_radius thermal wavelengths are
  /// skipped (applies to every edge of a loop); non-positive disables.
  double cutoff_radius = 0.0;
  /// Optional Gaussian damping exp(-(q_jk/q_c)^2) per loop edge.
  bool damping = false;
  double damping_scale = 1.0;
};

/// Loop phase sums eta^(l) for l = 2..lmax and their exponential resummation.
struct LoopExpansion {
  Statistics statistics = Statistics::bose;
  std::vector<Complex> loop_sums;  // loop_sums[i] is eta^(i+2)
  Complex total_exponential{1.0, 0.0};

  Complex eta(int l) const { return loop_sums.at(static_cast<std::size_t>(l - 2)); }
};

LoopExpansion loop_sums(const Configuration& config, const ThermalSystem& sys,
                        Statistics stats, const LoopSumOptions& opts = {});

/// Exact symmetrization function over all N! permutations; N <= 8.
Complex eta_bruteforce(const Configuration& config, const ThermalSystem& sys,
                       Statistics stats);

/// Both sides of the double-dimer identity: the restricted sum over
/// unordered pairs of disjoint transpositions versus half the squared dimer
/// sum minus the two printed corrections.
struct DoubleDimerCheck {
  Complex lhs;                    // sum over disjoint dimer pairs, each once
  Complex rhs;                    // eta2^2/2 - corr3/2 + corr2/4
  Complex correction_three_index; // sum_{j,k,l} eta_jk eta_jl (distinct from j)
  Complex correction_pair_sq;     // sum_{j,k} eta_jk^2
};

DoubleDimerCheck double_dimer_identity_check(const Configuration& config,
                                             const ThermalSystem& sys, Statistics stats);

/// Number of permutations of n objects with the given loop content
/// {(l, m_l)}: n! / prod_l l^{m_l} m_l!.
std::uint64_t permutation_count(std::span<const std::pair<int, int>> loop_spec, int n);

}  // namespace qoz
