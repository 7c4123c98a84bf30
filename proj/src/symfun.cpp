#include "pu/symfun.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "pu/errors.hpp"

namespace pu::symfun {
namespace {

double elementary_by_subsets(std::span<const double> vars, std::size_t j) {
  const std::size_t m = vars.size();
  double sum = 0.0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != j) continue;
    double prod = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      if (mask & (1u << k)) prod *= vars[k];
    }
    sum += prod;
  }
  return sum;
}

// e(x_1..x_k) = e(x_1..x_{k-1}) + x_k * e_{j-1}(x_1..x_{k-1}), built in place.
std::vector<double> elementary_by_recurrence(std::span<const double> vars) {
  std::vector<double> e(vars.size() + 1, 0.0);
  e[0] = 1.0;
  for (std::size_t k = 0; k < vars.size(); ++k) {
    for (std::size_t j = k + 1; j >= 1; --j) e[j] += vars[k] * e[j - 1];
  }
  return e;
}

}  // namespace

double elementary(std::span<const double> vars, std::size_t j) {
  if (j > vars.size()) {
    std::ostringstream os;
    os << "elementary symmetric degree " << j << " exceeds variable count " << vars.size();
    throw IndexOutOfRange(os.str());
  }
  if (vars.size() <= kSubsetEnumerationLimit) return elementary_by_subsets(vars, j);
  return elementary_by_recurrence(vars)[j];
}

std::vector<double> elementary_all(std::span<const double> vars) {
  if (vars.size() > kSubsetEnumerationLimit) return elementary_by_recurrence(vars);
  std::vector<double> e(vars.size() + 1);
  for (std::size_t j = 0; j <= vars.size(); ++j) e[j] = elementary_by_subsets(vars, j);
  return e;
}

double elementary_symmetric(const FrequencySet& freqs, std::size_t j) {
  const auto sq = freqs.squares();
  return elementary(sq, j);
}

double reduced_elementary_symmetric(const FrequencySet& freqs, std::size_t omit_index,
                                    std::size_t j) {
  const std::size_t n = freqs.size();
  if (omit_index < 1 || omit_index > n) {
    std::ostringstream os;
    os << "omitted index " << omit_index << " outside 1.." << n;
    throw IndexOutOfRange(os.str());
  }
  if (j >= n) {
    std::ostringstream os;
    os << "reduced elementary symmetric degree " << j << " must be below " << n;
    throw IndexOutOfRange(os.str());
  }
  std::vector<double> rest;
  rest.reserve(n - 1);
  for (std::size_t k = 0; k < n; ++k) {
    if (k + 1 != omit_index) rest.push_back(freqs[k] * freqs[k]);
  }
  return elementary(rest, j);
}

double power_sum_tau(const FrequencySet& freqs, unsigned k) {
  if (k == 0) throw InvalidArgument("power_sum_tau needs k >= 1");
  double sum = 0.0;
  for (double w : freqs.values()) sum += std::pow(w, static_cast<double>(k));
  return 2.0 * sum;
}

}  // namespace pu::symfun
