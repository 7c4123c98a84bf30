#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace pu {

/// Relative gap below which two frequencies count as equal.
inline constexpr double kDegeneracyTolerance = 1e-9;

bool frequencies_equal(double a, double b, double rel_tol = kDegeneracyTolerance);

/// A group of (numerically) equal frequencies. `members` holds the original
/// indices in order of appearance.
struct FrequencyCluster {
  double omega = 0.0;
  std::vector<std::size_t> members;
  std::size_t multiplicity() const { return members.size(); }
};

/// Ordered list of strictly positive angular frequencies. The order is the
/// mode labelling used everywhere else and is never changed.
class FrequencySet {
 public:
  explicit FrequencySet(std::vector<double> omegas);
  FrequencySet(std::initializer_list<double> omegas);

  std::size_t size() const noexcept { return omegas_.size(); }
  /// Phase-space dimension 2n.
  std::size_t dim() const noexcept { return 2 * omegas_.size(); }
  double operator[](std::size_t i) const { return omegas_[i]; }
  std::span<const double> values() const noexcept { return omegas_; }
  std::vector<double> squares() const;

  bool all_distinct(double rel_tol = kDegeneracyTolerance) const;
  /// Clusters in order of first appearance.
  std::vector<FrequencyCluster> clusters(double rel_tol = kDegeneracyTolerance) const;

  /// Throws DegenerateFrequencies naming the first coinciding pair.
  void require_distinct(const char* context) const;

 private:
  std::vector<double> omegas_;
};

}  // namespace pu
