#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "pu/classical.hpp"
#include "pu/dynamics.hpp"
#include "pu/frequencies.hpp"

// Quantization of the constant Poisson structures in terms of mode operators.
//
// Phase operators are written as x = M a + conj(M) a^+, where column i of M
// holds the derivative ladder of the i-th mode function at t = 0. Operator
// algebra is carried entirely by coefficient arrays of normally ordered
// monomials of degree <= 2.
namespace pu::quantum {

struct QuantumConfig {
  double hbar = 1.0;
  /// Throws InvalidArgument unless hbar is finite and positive.
  void validate() const;
};

struct ModeBasis {
  CMatrix m;  // 2n x n
  std::vector<ModalColumn> columns;
  bool has_secular_columns() const;
};

/// C(i,j) = [a_i, a_j^+], D(i,j) = [a_i, a_j].
struct ModeCommutators {
  CMatrix c;
  CMatrix d;
};

struct CommutatorSolve {
  ModeCommutators comms;
  /// max |[x_k, x_l] / i - hbar Pi^{kl}| of the reconstruction.
  double residual = 0.0;
};

/// Coefficients of a quadratic operator after normal ordering:
///   sum_ij N_ij a_i^+ a_j + sum_ij P_ij a_i a_j + h.c.(P) + zero_point.
struct NormalForm {
  std::vector<double> number_coeffs;  // N_ii
  double zero_point = 0.0;
  CMatrix offdiag_number;             // N_ij, i != j (diagonal zeroed)
  CMatrix squeeze;                    // P_ij
  double offdiag_magnitude() const;
  double squeeze_magnitude() const;
  /// sum_i N_ii k_i + zero_point; meaningful when the form is diagonal.
  double evaluate(const std::vector<std::size_t>& occupations) const;
};

ModeBasis build_mode_basis(const FrequencySet& freqs);

/// Solves [x_k, x_l] = i hbar Pi^{kl} for C and D by least squares and
/// certifies the reconstruction. Throws InconsistentQuantization when the
/// residual exceeds `rel_tol * max(1, max|hbar Pi|)`.
CommutatorSolve solve_mode_commutators(const ModeBasis& basis, const PoissonTensor& pt,
                                       const QuantumConfig& qc, double rel_tol = 1e-9);

/// Canonical commutators [a_i, a_j^+] = delta_ij, [a_i, a_j] = 0.
ModeCommutators unit_commutators(std::size_t n);

/// The (f, g) that make both fourth-order mode commutators equal to 1.
/// Coinciding frequencies are handed to fix_degenerate_parameters.
std::array<double, 2> fix_normalizing_parameters(const FrequencySet& freqs,
                                                 const QuantumConfig& qc);

/// (2 omega / hbar, -2 omega^3 / hbar): [a_1, a_1^+] = 1 and every other
/// commutator vanishes.
std::array<double, 2> fix_degenerate_parameters(double omega, const QuantumConfig& qc);

NormalForm normal_form(const QuadraticObservable& obs, const ModeBasis& basis,
                       const ModeCommutators& comms);

/// hbar * sum_i omega_i (n_i + 1/2). Throws DegenerateFrequencies for
/// repeated frequencies.
double spectrum(const FrequencySet& freqs, const std::vector<std::size_t>& quantum_numbers,
                const QuantumConfig& qc);

/// Quantization of the general-order tensor in both commutator conventions.
struct GeneralQuantization {
  PoissonTensor tensor;             // the hbar-free general tensor
  PoissonTensor unit_tensor;        // tensor / hbar, gives unit commutators
  ModeBasis basis;
  CommutatorSolve literal;          // commutators from [x, x] = i hbar * tensor
  CommutatorSolve unit;             // commutators from [x, x] = i hbar * unit_tensor
  std::vector<double> weights;      // Hamiltonian weights for unit_tensor
  double weights_residual = 0.0;
  QuadraticObservable hamiltonian;  // sum weights_i H_i
  NormalForm form;                  // under the unit commutators
};

/// Requires distinct frequencies.
GeneralQuantization quantize_general(const FrequencySet& freqs, const QuantumConfig& qc);

/// C = alpha a_2^+ a_2 + i beta (a_2 a_1^+ - a_1 a_2^+) plus a remainder.
struct DegenerateIntegralForm {
  NormalForm form;
  double secular_number = 0.0;  // alpha
  double mixing = 0.0;          // beta
  /// Largest coefficient not captured by alpha and beta.
  double remainder = 0.0;
};

struct DegenerateReport {
  double omega = 0.0;
  double f = 0.0;
  double g = 0.0;
  CommutatorSolve commutators;
  DegenerateIntegralForm cs1;
  DegenerateIntegralForm cs2;
  /// [a_2, a_2^+] vanishes: the secular pair behaves classically.
  bool secular_mode_classical = false;
};

DegenerateReport degenerate_analysis(double omega, const QuantumConfig& qc);

}  // namespace pu::quantum
