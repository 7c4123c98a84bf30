#include "pu/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pu/errors.hpp"

namespace pu::quantum {
namespace {

using Index = Eigen::Index;

double cmax_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Real parametrization of (C Hermitian, D antisymmetric):
//   [c_ii | (Re c_ij, Im c_ij)_{i<j} | (Re d_ij, Im d_ij)_{i<j}]
std::size_t unknown_count(std::size_t n) { return n + 2 * n * (n - 1); }

ModeCommutators unpack(const Vector& z, std::size_t n) {
  const auto ni = static_cast<Index>(n);
  ModeCommutators out{CMatrix::Zero(ni, ni), CMatrix::Zero(ni, ni)};
  Index k = 0;
  for (Index i = 0; i < ni; ++i) out.c(i, i) = z(k++);
  for (Index i = 0; i < ni; ++i) {
    for (Index j = i + 1; j < ni; ++j) {
      const Complex v(z(k), z(k + 1));
      k += 2;
      out.c(i, j) = v;
      out.c(j, i) = std::conj(v);
    }
  }
  for (Index i = 0; i < ni; ++i) {
    for (Index j = i + 1; j < ni; ++j) {
      const Complex v(z(k), z(k + 1));
      k += 2;
      out.d(i, j) = v;
      out.d(j, i) = -v;
    }
  }
  return out;
}

// [x_k, x_l] / i = 2 Im(M C M^H + M D M^T)
Matrix commutator_image(const CMatrix& m, const ModeCommutators& comms) {
  const CMatrix x = m * comms.c * m.adjoint() + m * comms.d * m.transpose();
  return 2.0 * x.imag();
}

Vector upper_entries(const Matrix& a) {
  const Index dim = a.rows();
  Vector out(dim * (dim - 1) / 2);
  Index k = 0;
  for (Index r = 0; r < dim; ++r) {
    for (Index s = r + 1; s < dim; ++s) out(k++) = a(r, s);
  }
  return out;
}

DegenerateIntegralForm split_degenerate(const QuadraticObservable& obs, const ModeBasis& basis,
                                        const ModeCommutators& comms) {
  DegenerateIntegralForm out;
  out.form = normal_form(obs, basis, comms);
  const CMatrix& n = out.form.offdiag_number;
  out.secular_number = out.form.number_coeffs[1];
  out.mixing = n(0, 1).imag();
  const Complex expected_21(0.0, -out.mixing);
  out.remainder = std::max({std::abs(out.form.number_coeffs[0]), std::abs(n(0, 1).real()),
                            std::abs(n(1, 0) - expected_21), out.form.squeeze_magnitude(),
                            std::abs(out.form.zero_point)});
  return out;
}

}  // namespace

void QuantumConfig::validate() const {
  if (!std::isfinite(hbar) || hbar <= 0.0) throw InvalidArgument("hbar must be positive");
}

bool ModeBasis::has_secular_columns() const {
  return std::any_of(columns.begin(), columns.end(),
                     [](const ModalColumn& c) { return c.power > 0; });
}

double NormalForm::offdiag_magnitude() const { return cmax_abs(offdiag_number); }
double NormalForm::squeeze_magnitude() const { return cmax_abs(squeeze); }

double NormalForm::evaluate(const std::vector<std::size_t>& occupations) const {
  if (occupations.size() != number_coeffs.size()) {
    throw DimensionMismatch("occupation list length does not match the mode count");
  }
  double e = zero_point;
  for (std::size_t i = 0; i < occupations.size(); ++i) {
    e += number_coeffs[i] * static_cast<double>(occupations[i]);
  }
  return e;
}

ModeBasis build_mode_basis(const FrequencySet& freqs) {
  ModeBasis out;
  out.columns = modal_columns(freqs);
  out.m = modal_matrix(out.columns, freqs.dim(), 0.0);
  return out;
}

CommutatorSolve solve_mode_commutators(const ModeBasis& basis, const PoissonTensor& pt,
                                       const QuantumConfig& qc, double rel_tol) {
  qc.validate();
  if (static_cast<std::size_t>(basis.m.rows()) != pt.dim()) {
    throw DimensionMismatch("mode basis and Poisson tensor dimensions differ");
  }
  const auto n = static_cast<std::size_t>(basis.m.cols());
  const std::size_t unknowns = unknown_count(n);
  const Matrix target = qc.hbar * pt.matrix();

  // Row k of M grows like omega^k; rescaling x_k by omega_max^-k equilibrates
  // the system without changing its solution.
  double omega_max = 0.0;
  for (const auto& c : basis.columns) omega_max = std::max(omega_max, c.omega);
  if (!(omega_max > 0.0)) omega_max = 1.0;
  Vector row_scale(basis.m.rows());
  for (Index k = 0; k < row_scale.size(); ++k) row_scale(k) = std::pow(omega_max, -static_cast<double>(k));
  const CMatrix scaled_m = row_scale.cast<Complex>().asDiagonal() * basis.m;
  const Vector rhs = upper_entries(row_scale.asDiagonal() * target * row_scale.asDiagonal());

  Matrix design(rhs.size(), static_cast<Index>(unknowns));
  for (std::size_t k = 0; k < unknowns; ++k) {
    Vector e = Vector::Zero(static_cast<Index>(unknowns));
    e(static_cast<Index>(k)) = 1.0;
    design.col(static_cast<Index>(k)) = upper_entries(commutator_image(scaled_m, unpack(e, n)));
  }
  const Vector z = design.completeOrthogonalDecomposition().solve(rhs);

  CommutatorSolve out;
  out.comms = unpack(z, n);
  out.residual = max_abs(commutator_image(basis.m, out.comms) - target);
  const double bound = rel_tol * std::max(1.0, max_abs(target));
  if (!(out.residual <= bound)) {
    std::ostringstream os;
    os << "tensor admits no mode-commutator realization in this basis (residual "
       << out.residual << ")";
    throw InconsistentQuantization(os.str(), out.residual);
  }
  return out;
}

ModeCommutators unit_commutators(std::size_t n) {
  const auto ni = static_cast<Index>(n);
  return {CMatrix::Identity(ni, ni), CMatrix::Zero(ni, ni)};
}

std::array<double, 2> fix_normalizing_parameters(const FrequencySet& freqs,
                                                 const QuantumConfig& qc) {
  qc.validate();
  if (freqs.size() != 2) throw UnsupportedOrder("parameter fixing is defined for n = 2 only");
  if (frequencies_equal(freqs[0], freqs[1])) return fix_degenerate_parameters(freqs[0], qc);

  const double w1 = freqs[0];
  const double w2 = freqs[1];
  const std::array<double, 2> fg{2.0 / qc.hbar * (w1 + w2),
                                 -2.0 / qc.hbar * (w1 * w1 * w1 + w2 * w2 * w2)};

  const auto solved =
      solve_mode_commutators(build_mode_basis(freqs), poisson_tensor_two_param(freqs, fg[0], fg[1]), qc);
  const double err = cmax_abs(solved.comms.c - CMatrix::Identity(2, 2));
  if (err > 1e-9) {
    std::ostringstream os;
    os << "fixed parameters do not normalize the commutators (deviation " << err << ")";
    throw InconsistentQuantization(os.str(), err);
  }
  return fg;
}

std::array<double, 2> fix_degenerate_parameters(double omega, const QuantumConfig& qc) {
  qc.validate();
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  const double f = 2.0 * omega / qc.hbar;
  return {f, -omega * omega * f};
}

NormalForm normal_form(const QuadraticObservable& obs, const ModeBasis& basis,
                       const ModeCommutators& comms) {
  if (obs.dim() != static_cast<std::size_t>(basis.m.rows())) {
    throw DimensionMismatch("observable and mode basis dimensions differ");
  }
  const auto n = basis.m.cols();
  if (comms.c.rows() != n || comms.c.cols() != n) {
    throw DimensionMismatch("commutator table does not match the mode count");
  }
  const CMatrix s = obs.matrix().cast<Complex>();
  const CMatrix& m = basis.m;
  // a_i a_j^+ = a_j^+ a_i + C_ij moves 1/2 tr(N C) into the constant.
  const CMatrix number = m.adjoint() * s * m;
  const CMatrix squeeze = 0.5 * m.transpose() * s * m;

  NormalForm out;
  out.number_coeffs.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) out.number_coeffs[static_cast<std::size_t>(i)] = number(i, i).real();
  out.offdiag_number = number;
  out.offdiag_number.diagonal().setZero();
  out.squeeze = squeeze;
  out.zero_point = 0.5 * (number * comms.c).trace().real();
  return out;
}

double spectrum(const FrequencySet& freqs, const std::vector<std::size_t>& quantum_numbers,
                const QuantumConfig& qc) {
  qc.validate();
  if (quantum_numbers.size() != freqs.size()) {
    std::ostringstream os;
    os << "expected " << freqs.size() << " quantum numbers, got " << quantum_numbers.size();
    throw DimensionMismatch(os.str());
  }
  if (!freqs.all_distinct()) {
    throw DegenerateFrequencies(
        "spectrum needs distinct frequencies; use the degenerate analysis for repeated ones");
  }
  double e = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    e += freqs[i] * (static_cast<double>(quantum_numbers[i]) + 0.5);
  }
  return qc.hbar * e;
}

GeneralQuantization quantize_general(const FrequencySet& freqs, const QuantumConfig& qc) {
  qc.validate();
  freqs.require_distinct("quantize_general");
  auto tensor = poisson_tensor_general(freqs);
  auto unit_tensor = tensor.scaled(1.0 / qc.hbar);
  auto basis = build_mode_basis(freqs);
  auto literal = solve_mode_commutators(basis, tensor, qc);
  auto unit = solve_mode_commutators(basis, unit_tensor, qc);
  auto weights = solve_hamiltonian_coefficients(freqs, unit_tensor);
  auto hamiltonian = weighted_sum(build_integrals(freqs), weights.coeffs);
  auto form = normal_form(hamiltonian, basis, unit.comms);
  return GeneralQuantization{std::move(tensor),
                             std::move(unit_tensor),
                             std::move(basis),
                             std::move(literal),
                             std::move(unit),
                             std::move(weights.coeffs),
                             weights.residual,
                             std::move(hamiltonian),
                             std::move(form)};
}

DegenerateReport degenerate_analysis(double omega, const QuantumConfig& qc) {
  qc.validate();
  const FrequencySet freqs{omega, omega};
  const auto [f, g] = fix_degenerate_parameters(omega, qc);
  const auto basis = build_mode_basis(freqs);

  DegenerateReport out;
  out.omega = omega;
  out.f = f;
  out.g = g;
  out.commutators = solve_mode_commutators(basis, poisson_tensor_two_param(freqs, f, g), qc);
  const auto cs = build_degenerate_integrals(omega);
  out.cs1 = split_degenerate(cs[0], basis, out.commutators.comms);
  out.cs2 = split_degenerate(cs[1], basis, out.commutators.comms);
  const double scale = std::max(1.0, cmax_abs(out.commutators.comms.c));
  out.secular_mode_classical = std::abs(out.commutators.comms.c(1, 1)) <= 1e-12 * scale;
  return out;
}

}  // namespace pu::quantum
