#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "pu/frequencies.hpp"

// Companion dynamics, quadratic integrals and constant Poisson tensors of the
// 2n-th order Pais-Uhlenbeck oscillator.
//
// Phase coordinates are x_1..x_{2n} with x_1 the position and x_{k+1} its
// k-th time derivative; in code they are stored 0-based. Mode indices in the
// public API (the i of q_i, H_i) are 1-based to match the usual labelling.
namespace pu {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using PhaseVector = Eigen::VectorXd;

/// Largest absolute entry; 0 for empty arrays.
double max_abs(const Matrix& m);

/// F(x) = 1/2 x^T S x with S symmetric.
class QuadraticObservable {
 public:
  /// Symmetrizes `s` as (s + s^T) / 2.
  explicit QuadraticObservable(const Matrix& s);
  static QuadraticObservable zero(std::size_t dim);
  /// F(x) = 1/2 (u.x)^2, the square of a linear form.
  static QuadraticObservable half_square(const Vector& u);

  const Matrix& matrix() const noexcept { return s_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(s_.rows()); }
  double value(const Vector& x) const;
  /// Gradient S x.
  Vector gradient(const Vector& x) const { return s_ * x; }

  QuadraticObservable operator+(const QuadraticObservable& o) const;
  QuadraticObservable operator-(const QuadraticObservable& o) const;
  QuadraticObservable operator*(double c) const;
  friend QuadraticObservable operator*(double c, const QuadraticObservable& q) { return q * c; }

 private:
  Matrix s_;
};

/// dx/dt = A x.
struct LinearVectorField {
  Matrix a;
  std::size_t dim() const noexcept { return static_cast<std::size_t>(a.rows()); }
  Vector apply(const Vector& x) const { return a * x; }
};

/// Coordinates q_i and momenta p_i as rows of linear forms in x.
struct LinearFormSet {
  Matrix q_rows;  // n x 2n
  Matrix p_rows;  // n x 2n
};

struct TwoParameterOrigin {
  double f = 0.0;
  double g = 0.0;
};
struct GeneralOrigin {};
using TensorOrigin = std::variant<std::monostate, TwoParameterOrigin, GeneralOrigin>;

/// Constant antisymmetric tensor of coordinate brackets {x_i, x_j}.
class PoissonTensor {
 public:
  /// Accepts a matrix that is antisymmetric up to rounding and stores the
  /// exact antisymmetric completion of its strict upper triangle. Throws
  /// InvalidArgument otherwise.
  explicit PoissonTensor(const Matrix& pi, TensorOrigin origin = {});
  static PoissonTensor zero(std::size_t dim);

  const Matrix& matrix() const noexcept { return pi_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(pi_.rows()); }
  /// 0-based component access.
  double operator()(std::size_t i, std::size_t j) const { return pi_(i, j); }
  const TensorOrigin& origin() const noexcept { return origin_; }

  /// Numerical rank; entries are treated relative to the largest one.
  std::size_t rank(double rel_tol = 1e-10) const;
  PoissonTensor scaled(double c) const;

 private:
  Matrix pi_;
  TensorOrigin origin_;
};

LinearVectorField build_vector_field(const FrequencySet& freqs);

/// Requires pairwise distinct frequencies.
LinearFormSet build_oscillator_variables(const FrequencySet& freqs);

/// H_i = 1/2 (p_i^2 + omega_i^2 q_i^2), i in 1..n.
QuadraticObservable build_integral(const FrequencySet& freqs, std::size_t i);
std::vector<QuadraticObservable> build_integrals(const FrequencySet& freqs);

struct NamedCombinations {
  std::optional<QuadraticObservable> h_canonical;     // H_1 + H_2, distinct frequencies only
  std::optional<QuadraticObservable> h_pais_uhlenbeck;  // H_1 - H_2, distinct frequencies only
  QuadraticObservable c1;
  QuadraticObservable c2;
};

/// Fourth order only. C1, C2 come from their explicit polynomial forms and
/// stay valid for omega_1 = omega_2.
NamedCombinations build_named_combinations(const FrequencySet& freqs);

/// The integrals C_s1, C_s2 written directly for a doubled frequency.
std::array<QuadraticObservable, 2> build_degenerate_integrals(double omega);

PoissonTensor poisson_tensor_two_param(const FrequencySet& freqs, double f, double g);

/// Pi^{i,i+1+2j} = (-1)^j tau_{2i-1+2j} (1-based), antisymmetric completion.
PoissonTensor poisson_tensor_general(const FrequencySet& freqs);

/// {F, G} as a quadratic observable: S = S_F Pi S_G + (S_F Pi S_G)^T.
QuadraticObservable poisson_bracket(const QuadraticObservable& f, const QuadraticObservable& g,
                                    const PoissonTensor& pt);

/// {u.x, v.x} = u^T Pi v.
double linear_bracket(const Vector& u, const Vector& v, const PoissonTensor& pt);

/// max |A Pi + Pi A^T|; zero iff the field preserves the tensor.
double lie_derivative_residual(const LinearVectorField& field, const PoissonTensor& pt);

/// [[Pi,Pi]]^{ijk} for a tensor with value `pi` and partial derivatives
/// `d_pi[m] = d Pi / d x_m` at one point.
std::vector<double> schouten_bracket(const Matrix& pi, const std::vector<Matrix>& d_pi);

/// max |[[Pi,Pi]]| for a constant tensor.
double schouten_residual(const PoissonTensor& pt);

/// The directional derivative V(F) as a quadratic observable.
QuadraticObservable directional_derivative(const QuadraticObservable& f,
                                           const LinearVectorField& field);

/// Closed-form weights (a_1, a_2) making a_1 H_1 + a_2 H_2 generate the
/// fourth order dynamics under Pi_{f,g}.
std::array<double, 2> hamiltonian_coefficients_two_param(const FrequencySet& freqs, double f,
                                                         double g);

struct CoefficientSolve {
  std::vector<double> coeffs;
  double residual = 0.0;
};

/// Least-squares weights c with Pi * S(sum c_i H_i) = A. Throws
/// NoUniqueCoefficients when the stacked system is rank deficient.
CoefficientSolve solve_hamiltonian_coefficients(const FrequencySet& freqs,
                                                const PoissonTensor& pt);

/// The closed-form weights 1 / (omega_i prod_{j != i}(omega_i^2 - omega_j^2))
/// printed alongside the general tensor. Kept only for comparison against the
/// solved weights; they do not generate the dynamics with that tensor.
std::vector<double> printed_general_coefficients(const FrequencySet& freqs);

QuadraticObservable weighted_sum(const std::vector<QuadraticObservable>& terms,
                                 const std::vector<double>& weights);

/// max |Pi S_H - A|; zero certifies dx/dt = {x, H}.
double verify_generates_dynamics(const QuadraticObservable& h, const PoissonTensor& pt,
                                 const LinearVectorField& field);

}  // namespace pu
