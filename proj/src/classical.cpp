#include "pu/classical.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pu/errors.hpp"
#include "pu/symfun.hpp"

namespace pu {
namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* context) {
  if (a != b) {
    std::ostringstream os;
    os << context << ": dimension mismatch (" << a << " vs " << b << ")";
    throw DimensionMismatch(os.str());
  }
}

void require_fourth_order(const FrequencySet& freqs, const char* context) {
  if (freqs.size() != 2) {
    std::ostringstream os;
    os << context << " is defined for n = 2 only, got n = " << freqs.size();
    throw UnsupportedOrder(os.str());
  }
}

}  // namespace

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// --- QuadraticObservable ---------------------------------------------------

QuadraticObservable::QuadraticObservable(const Matrix& s) {
  if (s.rows() != s.cols()) throw DimensionMismatch("quadratic observable needs a square array");
  s_ = 0.5 * (s + s.transpose());
}

QuadraticObservable QuadraticObservable::zero(std::size_t dim) {
  return QuadraticObservable(Matrix::Zero(dim, dim));
}

QuadraticObservable QuadraticObservable::half_square(const Vector& u) {
  return QuadraticObservable(u * u.transpose());
}

double QuadraticObservable::value(const Vector& x) const {
  require_same_dim(dim(), static_cast<std::size_t>(x.size()), "QuadraticObservable::value");
  return 0.5 * x.dot(s_ * x);
}

QuadraticObservable QuadraticObservable::operator+(const QuadraticObservable& o) const {
  require_same_dim(dim(), o.dim(), "QuadraticObservable::operator+");
  return QuadraticObservable(s_ + o.s_);
}

QuadraticObservable QuadraticObservable::operator-(const QuadraticObservable& o) const {
  require_same_dim(dim(), o.dim(), "QuadraticObservable::operator-");
  return QuadraticObservable(s_ - o.s_);
}

QuadraticObservable QuadraticObservable::operator*(double c) const {
  return QuadraticObservable(c * s_);
}

// --- PoissonTensor ---------------------------------------------------------

PoissonTensor::PoissonTensor(const Matrix& pi, TensorOrigin origin) : origin_(origin) {
  if (pi.rows() != pi.cols()) throw DimensionMismatch("Poisson tensor needs a square array");
  const double scale = std::max(1.0, max_abs(pi));
  if (max_abs(pi + pi.transpose()) > 1e-12 * scale) {
    throw InvalidArgument("Poisson tensor must be antisymmetric");
  }
  const auto n = pi.rows();
  pi_ = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      pi_(i, j) = pi(i, j);
      pi_(j, i) = -pi(i, j);
    }
  }
}

PoissonTensor PoissonTensor::zero(std::size_t dim) { return PoissonTensor(Matrix::Zero(dim, dim)); }

std::size_t PoissonTensor::rank(double rel_tol) const {
  const double scale = max_abs(pi_);
  if (scale == 0.0) return 0;
  Eigen::FullPivLU<Matrix> lu(pi_ / scale);
  lu.setThreshold(rel_tol);
  return static_cast<std::size_t>(lu.rank());
}

PoissonTensor PoissonTensor::scaled(double c) const {
  TensorOrigin origin = origin_;
  if (auto* tp = std::get_if<TwoParameterOrigin>(&origin)) {
    tp->f *= c;
    tp->g *= c;
  } else {
    origin = std::monostate{};
  }
  return PoissonTensor(c * pi_, origin);
}

// --- builders --------------------------------------------------------------

LinearVectorField build_vector_field(const FrequencySet& freqs) {
  const std::size_t n = freqs.size();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  Matrix a = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i + 1 < dim; ++i) a(i, i + 1) = 1.0;
  // dx_{2n}/dt = -sum_j sigma_j x_{2(n-j)+1}
  const auto sigma = symfun::elementary_all(freqs.squares());
  for (std::size_t j = 1; j <= n; ++j) {
    a(dim - 1, static_cast<Eigen::Index>(2 * (n - j))) = -sigma[j];
  }
  return {a};
}

LinearFormSet build_oscillator_variables(const FrequencySet& freqs) {
  freqs.require_distinct("build_oscillator_variables");
  const std::size_t n = freqs.size();
  const auto dim = static_cast<Eigen::Index>(2 * n);
  LinearFormSet out{Matrix::Zero(static_cast<Eigen::Index>(n), dim),
                    Matrix::Zero(static_cast<Eigen::Index>(n), dim)};
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double s = symfun::reduced_elementary_symmetric(freqs, i, j);
      // x_{2(n-j)-1} and x_{2(n-j)} in 1-based labels
      const auto col = static_cast<Eigen::Index>(2 * (n - j) - 2);
      out.q_rows(static_cast<Eigen::Index>(i - 1), col) = s;
      out.p_rows(static_cast<Eigen::Index>(i - 1), col + 1) = s;
    }
  }
  return out;
}

QuadraticObservable build_integral(const FrequencySet& freqs, std::size_t i) {
  if (i < 1 || i > freqs.size()) {
    std::ostringstream os;
    os << "mode index " << i << " outside 1.." << freqs.size();
    throw IndexOutOfRange(os.str());
  }
  const auto vars = build_oscillator_variables(freqs);
  const auto r = static_cast<Eigen::Index>(i - 1);
  const double w2 = freqs[i - 1] * freqs[i - 1];
  const Vector q = vars.q_rows.row(r).transpose();
  const Vector p = vars.p_rows.row(r).transpose();
  return QuadraticObservable::half_square(p) + w2 * QuadraticObservable::half_square(q);
}

std::vector<QuadraticObservable> build_integrals(const FrequencySet& freqs) {
  std::vector<QuadraticObservable> out;
  out.reserve(freqs.size());
  for (std::size_t i = 1; i <= freqs.size(); ++i) out.push_back(build_integral(freqs, i));
  return out;
}

NamedCombinations build_named_combinations(const FrequencySet& freqs) {
  require_fourth_order(freqs, "build_named_combinations");
  const double w1 = freqs[0] * freqs[0];
  const double w2 = freqs[1] * freqs[1];
  const double s1 = w1 + w2;
  const double s2 = w1 * w2;

  Matrix c1 = Matrix::Zero(4, 4);
  c1(1, 1) = -s2;
  c1(2, 2) = s1;
  c1(3, 3) = 1.0;
  c1(0, 2) = c1(2, 0) = s2;

  Matrix c2 = Matrix::Zero(4, 4);
  c2(0, 0) = s2;
  c2(1, 1) = s1;
  c2(2, 2) = -1.0;
  c2(1, 3) = c2(3, 1) = 1.0;

  NamedCombinations out{std::nullopt, std::nullopt, QuadraticObservable(c1),
                        QuadraticObservable(c2)};
  if (freqs.all_distinct()) {
    const auto h1 = build_integral(freqs, 1);
    const auto h2 = build_integral(freqs, 2);
    out.h_canonical = h1 + h2;
    out.h_pais_uhlenbeck = h1 - h2;
  }
  return out;
}

std::array<QuadraticObservable, 2> build_degenerate_integrals(double omega) {
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  const double w2 = omega * omega;
  const double w4 = w2 * w2;

  Matrix s1 = Matrix::Zero(4, 4);
  s1(3, 3) = 1.0;
  s1(2, 2) = 2.0 * w2;
  s1(0, 2) = s1(2, 0) = w4;
  s1(1, 1) = -w4;

  Matrix s2 = Matrix::Zero(4, 4);
  s2(2, 2) = -1.0;
  s2(1, 1) = 2.0 * w2;
  s2(0, 0) = w4;
  s2(1, 3) = s2(3, 1) = 1.0;

  return {QuadraticObservable(s1), QuadraticObservable(s2)};
}

PoissonTensor poisson_tensor_two_param(const FrequencySet& freqs, double f, double g) {
  require_fourth_order(freqs, "poisson_tensor_two_param");
  const double w1 = freqs[0] * freqs[0];
  const double w2 = freqs[1] * freqs[1];
  Matrix pi = Matrix::Zero(4, 4);
  pi(0, 1) = f;
  pi(0, 3) = g;
  pi(1, 2) = -g;
  pi(2, 3) = -w1 * w2 * f - (w1 + w2) * g;
  return PoissonTensor(pi - pi.transpose(), TwoParameterOrigin{f, g});
}

PoissonTensor poisson_tensor_general(const FrequencySet& freqs) {
  const std::size_t dim = freqs.dim();
  Matrix pi = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t i = 1; i + 1 <= dim; ++i) {
    for (std::size_t j = 0; j <= (dim - i - 1) / 2; ++j) {
      const double sign = (j % 2 == 0) ? 1.0 : -1.0;
      const auto tau = symfun::power_sum_tau(freqs, static_cast<unsigned>(2 * i - 1 + 2 * j));
      pi(static_cast<Eigen::Index>(i - 1), static_cast<Eigen::Index>(i + 2 * j)) = sign * tau;
    }
  }
  return PoissonTensor(pi - pi.transpose(), GeneralOrigin{});
}

// --- brackets and residuals ------------------------------------------------

QuadraticObservable poisson_bracket(const QuadraticObservable& f, const QuadraticObservable& g,
                                    const PoissonTensor& pt) {
  require_same_dim(f.dim(), pt.dim(), "poisson_bracket");
  require_same_dim(g.dim(), pt.dim(), "poisson_bracket");
  const Matrix m = f.matrix() * pt.matrix() * g.matrix();
  // value(x) = 1/2 x^T (M + M^T) x = x^T M x
  return QuadraticObservable(m + m.transpose());
}

double linear_bracket(const Vector& u, const Vector& v, const PoissonTensor& pt) {
  require_same_dim(static_cast<std::size_t>(u.size()), pt.dim(), "linear_bracket");
  require_same_dim(static_cast<std::size_t>(v.size()), pt.dim(), "linear_bracket");
  return u.dot(pt.matrix() * v);
}

double lie_derivative_residual(const LinearVectorField& field, const PoissonTensor& pt) {
  require_same_dim(field.dim(), pt.dim(), "lie_derivative_residual");
  const Matrix& a = field.a;
  const Matrix& pi = pt.matrix();
  return max_abs(a * pi + pi * a.transpose());
}

std::vector<double> schouten_bracket(const Matrix& pi, const std::vector<Matrix>& d_pi) {
  const auto n = static_cast<std::size_t>(pi.rows());
  require_same_dim(n, d_pi.size(), "schouten_bracket");
  std::vector<double> out(n * n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        double sum = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
          const auto mi = static_cast<Eigen::Index>(m);
          sum += pi(mi, i) * d_pi[m](j, k) + pi(mi, j) * d_pi[m](k, i) +
                 pi(mi, k) * d_pi[m](i, j);
        }
        out[(i * n + j) * n + k] = sum;
      }
    }
  }
  return out;
}

double schouten_residual(const PoissonTensor& pt) {
  const auto n = static_cast<Eigen::Index>(pt.dim());
  const std::vector<Matrix> d_pi(pt.dim(), Matrix::Zero(n, n));
  double worst = 0.0;
  for (double v : schouten_bracket(pt.matrix(), d_pi)) worst = std::max(worst, std::abs(v));
  return worst;
}

QuadraticObservable directional_derivative(const QuadraticObservable& f,
                                           const LinearVectorField& field) {
  require_same_dim(f.dim(), field.dim(), "directional_derivative");
  // V(F) = (S x).(A x) = 1/2 x^T (S A + A^T S) x
  const Matrix sa = f.matrix() * field.a;
  return QuadraticObservable(sa + sa.transpose());
}

std::array<double, 2> hamiltonian_coefficients_two_param(const FrequencySet& freqs, double f,
                                                         double g) {
  require_fourth_order(freqs, "hamiltonian_coefficients_two_param");
  if (frequencies_equal(freqs[0], freqs[1])) {
    throw DegeneratePairing("Hamiltonian weights are singular for omega_1 = omega_2");
  }
  const double w1 = freqs[0] * freqs[0];
  const double w2 = freqs[1] * freqs[1];
  const double d1 = w2 * f + g;
  const double d2 = w1 * f + g;
  const double scale = std::max({std::abs(w2 * f), std::abs(w1 * f), std::abs(g)});
  const double eps = 1e-12 * std::max(scale, 1e-300);
  if (std::abs(d1) <= eps || std::abs(d2) <= eps) {
    throw DegeneratePairing("Poisson tensor parameters lie on a degenerate line");
  }
  return {1.0 / ((w2 - w1) * d1), -1.0 / ((w2 - w1) * d2)};
}

QuadraticObservable weighted_sum(const std::vector<QuadraticObservable>& terms,
                                 const std::vector<double>& weights) {
  require_same_dim(terms.size(), weights.size(), "weighted_sum");
  if (terms.empty()) throw InvalidArgument("weighted_sum of no terms");
  Matrix s = Matrix::Zero(terms[0].matrix().rows(), terms[0].matrix().cols());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    require_same_dim(terms[i].dim(), terms[0].dim(), "weighted_sum");
    s += weights[i] * terms[i].matrix();
  }
  return QuadraticObservable(s);
}

CoefficientSolve solve_hamiltonian_coefficients(const FrequencySet& freqs,
                                                const PoissonTensor& pt) {
  require_same_dim(freqs.dim(), pt.dim(), "solve_hamiltonian_coefficients");
  const auto integrals = build_integrals(freqs);
  const auto field = build_vector_field(freqs);
  const auto n = static_cast<Eigen::Index>(freqs.size());
  const auto d = static_cast<Eigen::Index>(freqs.dim());

  // Conjugating by diag(omega_max^k) and normalizing columns keeps the rank
  // test meaningful when the frequencies spread widely.
  const double omega_max = *std::max_element(freqs.values().begin(), freqs.values().end());
  Vector up(d), down(d);
  for (Eigen::Index k = 0; k < d; ++k) {
    up(k) = std::pow(omega_max, static_cast<double>(k));
    down(k) = 1.0 / up(k);
  }
  Matrix design(d * d, n);
  Vector col_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Matrix col = down.asDiagonal() * pt.matrix() *
                       integrals[static_cast<std::size_t>(i)].matrix() * up.asDiagonal();
    design.col(i) = col.reshaped();
    const double norm = design.col(i).norm();
    col_scale(i) = norm > 0.0 ? 1.0 / norm : 1.0;
    design.col(i) *= col_scale(i);
  }
  const Matrix rhs_matrix = down.asDiagonal() * field.a * up.asDiagonal();
  const Vector rhs = rhs_matrix.reshaped();

  Eigen::ColPivHouseholderQR<Matrix> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < n) {
    const auto null_dim = static_cast<std::size_t>(n - qr.rank());
    std::ostringstream os;
    os << "Hamiltonian weights are not unique for this tensor (null space dimension "
       << null_dim << ")";
    throw NoUniqueCoefficients(os.str(), null_dim);
  }
  const Vector c = col_scale.asDiagonal() * qr.solve(rhs);

  CoefficientSolve out;
  out.coeffs.assign(c.data(), c.data() + c.size());
  out.residual = verify_generates_dynamics(weighted_sum(integrals, out.coeffs), pt, field);
  return out;
}

std::vector<double> printed_general_coefficients(const FrequencySet& freqs) {
  freqs.require_distinct("printed_general_coefficients");
  std::vector<double> out(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    double denom = freqs[i];
    for (std::size_t j = 0; j < freqs.size(); ++j) {
      if (j != i) denom *= freqs[i] * freqs[i] - freqs[j] * freqs[j];
    }
    out[i] = 1.0 / denom;
  }
  return out;
}

double verify_generates_dynamics(const QuadraticObservable& h, const PoissonTensor& pt,
                                 const LinearVectorField& field) {
  require_same_dim(h.dim(), pt.dim(), "verify_generates_dynamics");
  require_same_dim(field.dim(), pt.dim(), "verify_generates_dynamics");
  return max_abs(pt.matrix() * h.matrix() - field.a);
}

}  // namespace pu
