#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pu/frequencies.hpp"

// Symmetric-function kernels in the squared frequencies.
namespace pu::symfun {

/// Largest variable count evaluated by explicit subset enumeration; above
/// this the one-variable-at-a-time recurrence is used.
inline constexpr std::size_t kSubsetEnumerationLimit = 6;

/// Elementary symmetric polynomial e_j of arbitrary real variables.
double elementary(std::span<const double> vars, std::size_t j);

/// All e_0..e_m of the variables, m = vars.size().
std::vector<double> elementary_all(std::span<const double> vars);

/// sigma^n_j: e_j of the squared frequencies. Throws IndexOutOfRange if j > n.
double elementary_symmetric(const FrequencySet& freqs, std::size_t j);

/// sigma^{n-1}_j(i hat): e_j of the squared frequencies with omega_i^2
/// removed. `omit_index` is 1-based. Throws IndexOutOfRange if j >= n or
/// the index is outside 1..n.
double reduced_elementary_symmetric(const FrequencySet& freqs, std::size_t omit_index,
                                    std::size_t j);

/// tau_k = 2 * sum_i omega_i^k, k >= 1.
double power_sum_tau(const FrequencySet& freqs, unsigned k);

}  // namespace pu::symfun
