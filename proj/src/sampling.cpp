#include "pu/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace pu {

FrequencySet Sampler::distinct_frequencies(std::size_t n, double lo, double hi, double min_gap) {
  std::vector<double> out;
  while (out.size() < n) {
    const double w = uniform(lo, hi);
    const bool far = std::all_of(out.begin(), out.end(), [&](double v) {
      return std::abs(v - w) / std::max(v, w) > min_gap;
    });
    if (far) out.push_back(w);
  }
  return FrequencySet(std::move(out));
}

PhaseVector Sampler::state(std::size_t dim, double amplitude) {
  PhaseVector x(static_cast<Eigen::Index>(dim));
  for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = uniform(-amplitude, amplitude);
  return x;
}

}  // namespace pu
