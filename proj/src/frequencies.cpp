#include "pu/frequencies.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pu/errors.hpp"

namespace pu {

bool frequencies_equal(double a, double b, double rel_tol) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return true;
  return std::abs(a - b) / scale < rel_tol;
}

FrequencySet::FrequencySet(std::vector<double> omegas) : omegas_(std::move(omegas)) {
  if (omegas_.empty()) throw InvalidArgument("frequency set must not be empty");
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    if (!std::isfinite(omegas_[i]) || omegas_[i] <= 0.0) {
      std::ostringstream os;
      os << "frequency " << i + 1 << " must be finite and positive, got " << omegas_[i];
      throw InvalidArgument(os.str());
    }
  }
}

FrequencySet::FrequencySet(std::initializer_list<double> omegas)
    : FrequencySet(std::vector<double>(omegas)) {}

std::vector<double> FrequencySet::squares() const {
  std::vector<double> out(omegas_.size());
  std::transform(omegas_.begin(), omegas_.end(), out.begin(), [](double w) { return w * w; });
  return out;
}

bool FrequencySet::all_distinct(double rel_tol) const {
  return clusters(rel_tol).size() == omegas_.size();
}

std::vector<FrequencyCluster> FrequencySet::clusters(double rel_tol) const {
  std::vector<FrequencyCluster> out;
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    auto it = std::find_if(out.begin(), out.end(), [&](const FrequencyCluster& c) {
      return frequencies_equal(c.omega, omegas_[i], rel_tol);
    });
    if (it == out.end()) {
      out.push_back({omegas_[i], {i}});
    } else {
      it->members.push_back(i);
    }
  }
  return out;
}

void FrequencySet::require_distinct(const char* context) const {
  for (std::size_t i = 0; i < omegas_.size(); ++i) {
    for (std::size_t j = i + 1; j < omegas_.size(); ++j) {
      if (frequencies_equal(omegas_[i], omegas_[j])) {
        std::ostringstream os;
        os << context << ": frequencies " << i + 1 << " and " << j + 1
           << " coincide (omega = " << omegas_[i] << ")";
        throw DegenerateFrequencies(os.str());
      }
    }
  }
}

}  // namespace pu
