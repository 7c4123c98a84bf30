#include "pu/dynamics.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "pu/errors.hpp"
#include "pu/format.hpp"

namespace pu {
namespace {

double binomial(std::size_t m, std::size_t r) {
  double out = 1.0;
  for (std::size_t k = 1; k <= r; ++k) out = out * static_cast<double>(m - r + k) / k;
  return out;
}

double falling_factorial(std::size_t p, std::size_t r) {
  double out = 1.0;
  for (std::size_t k = 0; k < r; ++k) out *= static_cast<double>(p - k);
  return out;
}

Complex ipow(Complex z, std::size_t e) {
  Complex out{1.0, 0.0};
  for (std::size_t k = 0; k < e; ++k) out *= z;
  return out;
}

double ipow(double x, std::size_t e) {
  double out = 1.0;
  for (std::size_t k = 0; k < e; ++k) out *= x;
  return out;
}

}  // namespace

std::vector<ModalColumn> modal_columns(const FrequencySet& freqs) {
  std::vector<ModalColumn> out;
  const auto clusters = freqs.clusters();
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    for (std::size_t p = 0; p < clusters[c].multiplicity(); ++p) {
      out.push_back({c, clusters[c].omega, p});
    }
  }
  return out;
}

CMatrix modal_matrix(const std::vector<ModalColumn>& columns, std::size_t dim, double t) {
  CMatrix b(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const Complex lambda{0.0, -columns[c].omega};
    const Complex phase = std::exp(lambda * t);
    const std::size_t p = columns[c].power;
    for (std::size_t m = 0; m < dim; ++m) {
      // Leibniz rule for d^m/dt^m [t^p e^{lambda t}]
      Complex sum{0.0, 0.0};
      for (std::size_t r = 0; r <= std::min(m, p); ++r) {
        sum += binomial(m, r) * falling_factorial(p, r) * ipow(t, p - r) * ipow(lambda, m - r);
      }
      b(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(c)) = sum * phase;
    }
  }
  return b;
}

ModalDecomposition decompose(const FrequencySet& freqs, const PhaseVector& x0) {
  const std::size_t dim = freqs.dim();
  if (static_cast<std::size_t>(x0.size()) != dim) {
    std::ostringstream os;
    os << "initial state has length " << x0.size() << ", expected " << dim;
    throw DimensionMismatch(os.str());
  }
  ModalDecomposition out;
  out.dim = dim;
  for (const auto& c : freqs.clusters()) {
    out.frequencies.push_back(c.omega);
    out.multiplicities.push_back(c.multiplicity());
  }
  out.columns = modal_columns(freqs);

  // x0 = 2 Re(B a) with a = u + i v  =>  [2 Re B, -2 Im B] [u; v] = x0
  const CMatrix b = modal_matrix(out.columns, dim, 0.0);
  const auto n = b.cols();
  Matrix sys(static_cast<Eigen::Index>(dim), 2 * n);
  sys.leftCols(n) = 2.0 * b.real();
  sys.rightCols(n) = -2.0 * b.imag();
  Eigen::FullPivLU<Matrix> lu(sys);
  if (!lu.isInvertible()) throw SingularSystem("modal initial-condition system is singular");
  const Vector uv = lu.solve(x0);
  out.amplitudes = CVector(n);
  for (Eigen::Index k = 0; k < n; ++k) out.amplitudes(k) = Complex(uv(k), uv(n + k));
  return out;
}

PhaseVector evaluate(const ModalDecomposition& modes, double t) {
  const CMatrix b = modal_matrix(modes.columns, modes.dim, t);
  return 2.0 * (b * modes.amplitudes).real();
}

PhaseVector exact_solution(const FrequencySet& freqs, const PhaseVector& x0, double t) {
  return evaluate(decompose(freqs, x0), t);
}

Trajectory exact_trajectory(const FrequencySet& freqs, const PhaseVector& x0, double dt,
                            std::size_t steps) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  const auto modes = decompose(freqs, x0);
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    traj.times.push_back(t);
    traj.states.push_back(k == 0 ? x0 : evaluate(modes, t));
  }
  return traj;
}

Trajectory integrate_rk4(const LinearVectorField& field, const PhaseVector& x0, double dt,
                         std::size_t steps) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  if (static_cast<std::size_t>(x0.size()) != field.dim()) {
    throw DimensionMismatch("initial state does not match the vector field dimension");
  }
  Trajectory traj;
  traj.times.reserve(steps + 1);
  traj.states.reserve(steps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(x0);

  Vector x = x0;
  for (std::size_t k = 1; k <= steps; ++k) {
    const Vector k1 = field.apply(x);
    const Vector k2 = field.apply(x + 0.5 * dt * k1);
    const Vector k3 = field.apply(x + 0.5 * dt * k2);
    const Vector k4 = field.apply(x + dt * k3);
    x += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite()) {
      std::ostringstream os;
      os << "RK4 state became non-finite at step " << k;
      throw Divergence(os.str(), k);
    }
    traj.times.push_back(static_cast<double>(k) * dt);
    traj.states.push_back(x);
  }
  return traj;
}

std::vector<double> conservation_drift(const Trajectory& traj,
                                       const std::vector<QuadraticObservable>& observables) {
  if (traj.size() == 0) throw InvalidArgument("conservation drift of an empty trajectory");
  std::vector<double> out;
  out.reserve(observables.size());
  for (const auto& obs : observables) {
    const double f0 = obs.value(traj.states.front());
    const double scale = std::max(1.0, std::abs(f0));
    double worst = 0.0;
    for (const auto& x : traj.states) worst = std::max(worst, std::abs(obs.value(x) - f0));
    out.push_back(worst / scale);
  }
  return out;
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  const std::size_t dim = traj.size() == 0 ? 0 : static_cast<std::size_t>(traj.states[0].size());
  os << 't';
  for (std::size_t k = 1; k <= dim; ++k) os << ",x" << k;
  os << '\n';
  for (std::size_t r = 0; r < traj.size(); ++r) {
    os << format_double(traj.times[r]);
    for (Eigen::Index k = 0; k < traj.states[r].size(); ++k) {
      os << ',' << format_double(traj.states[r](k));
    }
    os << '\n';
  }
}

}  // namespace pu
