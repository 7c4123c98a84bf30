#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "pu/classical.hpp"
#include "pu/frequencies.hpp"

namespace pu {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// One basis function t^power * exp(-i omega t) of the position x_1.
struct ModalColumn {
  std::size_t cluster = 0;
  double omega = 0.0;
  std::size_t power = 0;
};

/// Columns ordered by cluster (first appearance), then secular power.
std::vector<ModalColumn> modal_columns(const FrequencySet& freqs);

/// Row k (0-based) holds d^k/dt^k of each basis function at time t, so that
/// x(t) = 2 Re(B(t) a) for complex amplitudes a.
CMatrix modal_matrix(const std::vector<ModalColumn>& columns, std::size_t dim, double t);

struct ModalDecomposition {
  std::vector<double> frequencies;        // one per cluster
  std::vector<std::size_t> multiplicities;  // sums to n
  std::vector<ModalColumn> columns;
  CVector amplitudes;  // one per column
  std::size_t dim = 0;
};

/// Solves the 2n x 2n initial-condition system for the modal amplitudes.
/// Throws SingularSystem if the basis is not invertible.
ModalDecomposition decompose(const FrequencySet& freqs, const PhaseVector& x0);
PhaseVector evaluate(const ModalDecomposition& modes, double t);

PhaseVector exact_solution(const FrequencySet& freqs, const PhaseVector& x0, double t);

struct Trajectory {
  std::vector<double> times;
  std::vector<PhaseVector> states;
  std::size_t size() const noexcept { return times.size(); }
};

/// Samples the exact flow at t = k dt, k = 0..steps.
Trajectory exact_trajectory(const FrequencySet& freqs, const PhaseVector& x0, double dt,
                            std::size_t steps);

/// Classical fixed-step RK4; steps + 1 samples including t = 0. Throws
/// Divergence on the first non-finite state.
Trajectory integrate_rk4(const LinearVectorField& field, const PhaseVector& x0, double dt,
                         std::size_t steps);

/// Per observable: max_t |F(x(t)) - F(x(0))| / max(1, |F(x(0))|).
std::vector<double> conservation_drift(const Trajectory& traj,
                                       const std::vector<QuadraticObservable>& observables);

/// Header `t,x1,...,x2n`, one row per sample, shortest round-trip doubles.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

}  // namespace pu
