#include <doctest.h>

#include <cmath>
#include <functional>

#include "pu/classical.hpp"
#include "pu/errors.hpp"
#include "pu/sampling.hpp"
#include "pu/symfun.hpp"

using namespace pu;

namespace {

using Poly = std::function<double(const Vector&)>;

// Compares an observable against a hand-written polynomial at random points.
double max_poly_gap(const QuadraticObservable& obs, const Poly& p, std::uint64_t seed = 1) {
  Sampler s(seed);
  double worst = 0.0;
  for (int k = 0; k < 25; ++k) {
    const Vector x = s.state(obs.dim(), 2.0);
    worst = std::max(worst, std::abs(obs.value(x) - p(x)));
  }
  return worst;
}

Matrix canonical_symplectic(std::size_t n) {
  const auto ni = static_cast<Eigen::Index>(n);
  Matrix j = Matrix::Zero(2 * ni, 2 * ni);
  j.topRightCorner(ni, ni).setIdentity();
  j.bottomLeftCorner(ni, ni) = -Matrix::Identity(ni, ni);
  return j;
}

}  // namespace

TEST_CASE("companion vector field") {
  const auto a1 = build_vector_field(FrequencySet{1}).a;
  Matrix expect(2, 2);
  expect << 0, 1, -1, 0;
  CHECK(max_abs(a1 - expect) == 0.0);

  const auto a2 = build_vector_field(FrequencySet{1, 2}).a;
  CHECK(a2(3, 0) == doctest::Approx(-4.0));
  CHECK(a2(3, 1) == 0.0);
  CHECK(a2(3, 2) == doctest::Approx(-5.0));
  CHECK(a2(3, 3) == 0.0);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 4; ++c) CHECK(a2(r, c) == (c == r + 1 ? 1.0 : 0.0));
  }

  const auto a3 = build_vector_field(FrequencySet{1, 2, 3}).a;
  CHECK(a3(5, 0) == doctest::Approx(-36.0));
  CHECK(a3(5, 2) == doctest::Approx(-49.0));
  CHECK(a3(5, 4) == doctest::Approx(-14.0));
  CHECK(a3(5, 1) == 0.0);
  CHECK(a3(5, 3) == 0.0);
  CHECK(a3(5, 5) == 0.0);
}

TEST_CASE("companion characteristic polynomial has roots +-i omega") {
  const FrequencySet f{0.7, 1.3, 2.1};
  const auto a = build_vector_field(f).a;
  Eigen::EigenSolver<Matrix> es(a);
  std::vector<double> im;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    CHECK(std::abs(es.eigenvalues()(k).real()) < 1e-9);
    im.push_back(std::abs(es.eigenvalues()(k).imag()));
  }
  std::sort(im.begin(), im.end());
  CHECK(im[0] == doctest::Approx(0.7));
  CHECK(im[2] == doctest::Approx(1.3));
  CHECK(im[4] == doctest::Approx(2.1));
}

TEST_CASE("oscillator variables") {
  const auto v = build_oscillator_variables(FrequencySet{1, 2});
  Vector q1(4), p2(4);
  q1 << 4, 0, 1, 0;
  p2 << 0, 1, 0, 1;
  CHECK(max_abs(v.q_rows.row(0).transpose() - q1) == 0.0);
  CHECK(max_abs(v.p_rows.row(1).transpose() - p2) == 0.0);

  const auto v3 = build_oscillator_variables(FrequencySet{1, 2, 3});
  CHECK(v3.q_rows(1, 4) == doctest::Approx(1.0));
  CHECK(v3.q_rows(1, 2) == doctest::Approx(10.0));
  CHECK(v3.q_rows(1, 0) == doctest::Approx(9.0));
  CHECK(v3.q_rows(1, 1) == 0.0);

  CHECK_THROWS_AS(build_oscillator_variables(FrequencySet{1, 1}), DegenerateFrequencies);
}

TEST_CASE("each q_i is a harmonic coordinate of its own frequency") {
  Sampler s(3);
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto f = s.distinct_frequencies(n);
    const auto a = build_vector_field(f).a;
    const auto v = build_oscillator_variables(f);
    for (std::size_t i = 0; i < n; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      const Vector q = v.q_rows.row(ii).transpose();
      const Vector p = v.p_rows.row(ii).transpose();
      // dq/dt = p and dp/dt = -omega^2 q along dx/dt = A x
      CHECK(max_abs(a.transpose() * q - p) < 1e-12 * std::max(1.0, max_abs(p)));
      CHECK(max_abs(a.transpose() * p + f[i] * f[i] * q) < 1e-11 * std::max(1.0, max_abs(q)));
    }
  }
}

TEST_CASE("integral examples") {
  const FrequencySet f{1, 2};
  const auto h1 = build_integral(f, 1);
  CHECK(max_poly_gap(h1, [](const Vector& x) {
          return 0.5 * std::pow(x(3) + 4 * x(1), 2) + 0.5 * std::pow(x(2) + 4 * x(0), 2);
        }) < 1e-12);
  const auto h2 = build_integral(f, 2);
  CHECK(max_poly_gap(h2, [](const Vector& x) {
          return 0.5 * std::pow(x(3) + x(1), 2) + 2.0 * std::pow(x(2) + x(0), 2);
        }) < 1e-12);
  Vector e1 = Vector::Zero(4);
  e1(0) = 1;
  CHECK(h2.value(e1) == doctest::Approx(2.0));

  const auto single = build_integral(FrequencySet{1}, 1);
  CHECK(max_poly_gap(single, [](const Vector& x) { return 0.5 * (x(0) * x(0) + x(1) * x(1)); }) < 1e-14);

  CHECK_THROWS_AS(build_integral(f, 0), IndexOutOfRange);
  CHECK_THROWS_AS(build_integral(f, 3), IndexOutOfRange);
  CHECK_THROWS_AS(build_integral(FrequencySet{2, 2}, 1), DegenerateFrequencies);
}

TEST_CASE("named combinations") {
  const FrequencySet f{1, 2};
  const auto named = build_named_combinations(f);
  CHECK(max_poly_gap(named.c2, [](const Vector& x) {
          return 2 * x(0) * x(0) + 2.5 * x(1) * x(1) - 0.5 * x(2) * x(2) + x(1) * x(3);
        }) < 1e-12);
  CHECK(max_poly_gap(named.c1, [](const Vector& x) {
          return -2 * x(1) * x(1) + 2.5 * x(2) * x(2) + 0.5 * x(3) * x(3) + 4 * x(0) * x(2);
        }) < 1e-12);
  CHECK(named.c1.matrix()(0, 2) == doctest::Approx(4.0));

  const auto h1 = build_integral(f, 1).matrix();
  const auto h2 = build_integral(f, 2).matrix();
  REQUIRE(named.h_canonical.has_value());
  REQUIRE(named.h_pais_uhlenbeck.has_value());
  CHECK(max_abs(named.h_canonical->matrix() - (h1 + h2)) < 1e-12);
  CHECK(max_abs(named.h_pais_uhlenbeck->matrix() - (h1 - h2)) < 1e-12);

  CHECK_THROWS_AS(build_named_combinations(FrequencySet{1, 2, 3}), UnsupportedOrder);
  CHECK_THROWS_AS(build_named_combinations(FrequencySet{1}), UnsupportedOrder);
}

TEST_CASE("combinations reduce to the doubled-frequency integrals") {
  for (double w : {1.0, 0.6, 2.5}) {
    const auto named = build_named_combinations(FrequencySet{w, w});
    CHECK_FALSE(named.h_canonical.has_value());
    const auto cs = build_degenerate_integrals(w);
    const double w2 = w * w, w4 = w2 * w2;
    CHECK(max_poly_gap(cs[0], [=](const Vector& x) {
            return 0.5 * x(3) * x(3) + w2 * x(2) * x(2) + w4 * x(0) * x(2) - 0.5 * w4 * x(1) * x(1);
          }) < 1e-11);
    CHECK(max_poly_gap(cs[1], [=](const Vector& x) {
            return -0.5 * x(2) * x(2) + w2 * x(1) * x(1) + 0.5 * w4 * x(0) * x(0) + x(1) * x(3);
          }) < 1e-11);
    CHECK(max_abs(named.c1.matrix() - cs[0].matrix()) < 1e-12);
    CHECK(max_abs(named.c2.matrix() - cs[1].matrix()) < 1e-12);
  }
}

TEST_CASE("two-parameter tensor") {
  const FrequencySet f{1, 2};
  const auto pi1 = poisson_tensor_two_param(f, -0.25, 0.0);
  CHECK(pi1(0, 1) == doctest::Approx(-0.25));
  CHECK(pi1(2, 3) == doctest::Approx(1.0));
  CHECK(pi1(0, 3) == 0.0);
  CHECK(pi1(1, 2) == 0.0);
  CHECK(pi1(1, 0) == doctest::Approx(0.25));

  const auto pi2 = poisson_tensor_two_param(f, 0.0, 1.0);
  CHECK(pi2(0, 3) == doctest::Approx(1.0));
  CHECK(pi2(1, 2) == doctest::Approx(-1.0));
  CHECK(pi2(2, 3) == doctest::Approx(-5.0));
  CHECK(pi2(0, 1) == 0.0);

  CHECK(max_abs(poisson_tensor_two_param(f, 0, 0).matrix()) == 0.0);
  CHECK(poisson_tensor_two_param(f, 1, 0).rank() == 4);
  // rank drops on the lines omega_2^2 f + g = 0 and omega_1^2 f + g = 0
  CHECK(poisson_tensor_two_param(f, 1, -4).rank() == 2);
  CHECK(poisson_tensor_two_param(f, 1, -1).rank() == 2);

  const auto tagged = poisson_tensor_two_param(f, 2.5, -1.0);
  const auto& origin = tagged.origin();
  REQUIRE(std::holds_alternative<TwoParameterOrigin>(origin));
  CHECK(std::get<TwoParameterOrigin>(origin).f == 2.5);
  CHECK_THROWS_AS(poisson_tensor_two_param(FrequencySet{1, 2, 3}, 1, 0), UnsupportedOrder);
}

TEST_CASE("general tensor") {
  const auto pt = poisson_tensor_general(FrequencySet{1, 2});
  CHECK(pt(0, 1) == doctest::Approx(6.0));
  CHECK(pt(0, 3) == doctest::Approx(-18.0));
  CHECK(pt(1, 2) == doctest::Approx(18.0));
  CHECK(pt(2, 3) == doctest::Approx(66.0));
  CHECK(pt(0, 2) == 0.0);
  CHECK(pt(1, 3) == 0.0);
  CHECK(max_abs(pt.matrix() - poisson_tensor_two_param(FrequencySet{1, 2}, 6, -18).matrix()) < 1e-12);
  CHECK(std::holds_alternative<GeneralOrigin>(pt.origin()));

  CHECK(poisson_tensor_general(FrequencySet{1})(0, 1) == doctest::Approx(2.0));

  // independent construction of the sign-alternating pattern for n = 3
  const FrequencySet f3{1, 2, 3};
  const auto g3 = poisson_tensor_general(f3);
  for (int i = 1; i <= 6; ++i) {
    for (int k = i + 1; k <= 6; ++k) {
      double expect = 0.0;
      if ((k - i) % 2 == 1) {
        const int j = (k - i - 1) / 2;
        expect = (j % 2 ? -1.0 : 1.0) * symfun::power_sum_tau(f3, static_cast<unsigned>(2 * i - 1 + 2 * j));
      }
      CHECK(g3(i - 1, k - 1) == doctest::Approx(expect));
    }
  }
}

TEST_CASE("tensor construction rejects non-antisymmetric input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = 1.0;
  CHECK_THROWS_AS(PoissonTensor{m}, InvalidArgument);
  m(1, 0) = -1.0;
  CHECK_NOTHROW(PoissonTensor{m});
  m(0, 0) = 0.1;
  CHECK_THROWS_AS(PoissonTensor{m}, InvalidArgument);
}

TEST_CASE("brackets") {
  const FrequencySet f{1, 2};
  const auto h1 = build_integral(f, 1);
  const auto pt = poisson_tensor_two_param(f, 1.7, -0.4);
  CHECK(max_abs(poisson_bracket(h1, h1, pt).matrix()) < 1e-12);

  Vector e3 = Vector::Zero(4), e4 = Vector::Zero(4);
  e3(2) = 1;
  e4(3) = 1;
  CHECK(linear_bracket(e3, e4, poisson_tensor_two_param(f, -0.25, 0)) == doctest::Approx(1.0));

  // {F, G}(x) = grad F . Pi grad G, checked pointwise
  const auto c1 = build_named_combinations(f).c1;
  const auto h2 = build_integral(f, 2);
  const auto b = poisson_bracket(c1, h2, pt);
  Sampler s(17);
  for (int k = 0; k < 10; ++k) {
    const Vector x = s.state(4);
    const double direct = c1.gradient(x).dot(pt.matrix() * h2.gradient(x));
    CHECK(b.value(x) == doctest::Approx(direct).epsilon(1e-12));
  }

  CHECK_THROWS_AS(poisson_bracket(h1, build_integral(FrequencySet{1}, 1), pt), DimensionMismatch);
}

TEST_CASE("involution of C1 and C2 for random parameters") {
  Sampler s(23);
  for (int pair = 0; pair < 5; ++pair) {
    const auto f = s.distinct_frequencies(2);
    const auto named = build_named_combinations(f);
    for (int k = 0; k < 100; ++k) {
      const auto pt = poisson_tensor_two_param(f, s.uniform(-10, 10), s.uniform(-10, 10));
      CHECK(max_abs(poisson_bracket(named.c1, named.c2, pt).matrix()) < 1e-10);
    }
  }
}

TEST_CASE("Lie derivative") {
  Sampler s(29);
  const FrequencySet f{1, 2};
  const auto field = build_vector_field(f);
  for (int k = 0; k < 100; ++k) {
    CHECK(lie_derivative_residual(field, poisson_tensor_two_param(f, s.uniform(-10, 10), s.uniform(-10, 10))) <
          1e-12);
  }
  CHECK(lie_derivative_residual(build_vector_field(FrequencySet{1, 2, 3}),
                                poisson_tensor_general(FrequencySet{1, 2, 3})) < 1e-12);
  CHECK(lie_derivative_residual(field, PoissonTensor(canonical_symplectic(2))) > 0.1);

  for (std::size_t n = 1; n <= 4; ++n) {
    const auto g = s.distinct_frequencies(n);
    const auto pt = poisson_tensor_general(g);
    const auto a = build_vector_field(g);
    CHECK(lie_derivative_residual(a, pt) <= 1e-12 * std::max(1.0, max_abs(a.a) * max_abs(pt.matrix())));
  }
}

TEST_CASE("Schouten bracket") {
  CHECK(schouten_residual(poisson_tensor_general(FrequencySet{1, 2, 3})) == 0.0);
  CHECK(schouten_residual(PoissonTensor::zero(4)) == 0.0);
  CHECK(schouten_residual(poisson_tensor_two_param(FrequencySet{1, 2}, 3, 4)) == 0.0);

  // Linear tensors on R^3: {x_i, x_j} = eps_ijk v_k(x) satisfies Jacobi iff v . curl v = 0.
  auto eps = [](int i, int j, int k) {
    return static_cast<double>((i - j) * (j - k) * (k - i)) / 2.0;
  };
  Vector x(3);
  x << 0.3, -1.1, 0.8;
  {
    // so(3): v = x, curl v = 0
    Matrix pi = Matrix::Zero(3, 3);
    std::vector<Matrix> d(3, Matrix::Zero(3, 3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          pi(i, j) += eps(i, j, k) * x(k);
          d[static_cast<std::size_t>(k)](i, j) = eps(i, j, k);
        }
    double worst = 0.0;
    for (double v : schouten_bracket(pi, d)) worst = std::max(worst, std::abs(v));
    CHECK(worst < 1e-14);
  }
  {
    // v = (-x2, x1, 1): v . curl v = 2, not Poisson
    const Vector v = (Vector(3) << -x(1), x(0), 1.0).finished();
    Matrix dv = Matrix::Zero(3, 3);  // dv(k, m) = d v_k / d x_m
    dv(0, 1) = -1.0;
    dv(1, 0) = 1.0;
    Matrix pi = Matrix::Zero(3, 3);
    std::vector<Matrix> d(3, Matrix::Zero(3, 3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) {
          pi(i, j) += eps(i, j, k) * v(k);
          for (int m = 0; m < 3; ++m) d[static_cast<std::size_t>(m)](i, j) += eps(i, j, k) * dv(k, m);
        }
    double worst = 0.0;
    for (double val : schouten_bracket(pi, d)) worst = std::max(worst, std::abs(val));
    CHECK(worst > 0.5);
  }
}

TEST_CASE("conservation of every H_i") {
  Sampler s(31);
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = s.distinct_frequencies(n);
      const auto field = build_vector_field(f);
      for (const auto& h : build_integrals(f)) {
        const auto vh = directional_derivative(h, field);
        CHECK(max_abs(vh.matrix()) <= 1e-12 * std::max(1.0, max_abs(h.matrix()) * max_abs(field.a)));
        const Vector x = s.state(f.dim());
        CHECK(std::abs(h.gradient(x).dot(field.apply(x))) < 1e-10 * std::max(1.0, max_abs(h.matrix())));
      }
    }
  }
}

TEST_CASE("sum, difference and combination identities") {
  Sampler s(37);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = s.distinct_frequencies(2);
    const auto named = build_named_combinations(f);
    const Matrix h1 = build_integral(f, 1).matrix();
    const Matrix h2 = build_integral(f, 2).matrix();
    const double w1 = f[0] * f[0], w2 = f[1] * f[1];
    CHECK(max_abs(named.h_canonical->matrix() - (h1 + h2)) < 1e-12);
    CHECK(max_abs(named.h_pais_uhlenbeck->matrix() - (h1 - h2)) < 1e-12);
    CHECK(max_abs(named.c1.matrix() - (w1 * h1 - w2 * h2) / (w1 - w2)) < 1e-11);
    CHECK(max_abs(named.c2.matrix() + (h1 - h2) / (w1 - w2)) < 1e-11);
  }
}

TEST_CASE("bilinearity and consistency of the tensor families") {
  Sampler s(41);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = s.distinct_frequencies(2);
    const double a = s.uniform(-10, 10), b = s.uniform(-10, 10);
    const Matrix lhs = poisson_tensor_two_param(f, a, b).matrix();
    const Matrix rhs =
        a * poisson_tensor_two_param(f, 1, 0).matrix() + b * poisson_tensor_two_param(f, 0, 1).matrix();
    CHECK(max_abs(lhs - rhs) < 1e-12 * std::max(1.0, max_abs(lhs)));
    const Matrix general = poisson_tensor_general(f).matrix();
    const Matrix two =
        poisson_tensor_two_param(f, symfun::power_sum_tau(f, 1), -symfun::power_sum_tau(f, 3)).matrix();
    CHECK(max_abs(general - two) < 1e-12 * std::max(1.0, max_abs(general)));
  }
}

TEST_CASE("closed-form Hamiltonian weights") {
  const FrequencySet f{1, 2};
  auto w = hamiltonian_coefficients_two_param(f, 6, -18);
  CHECK(w[0] == doctest::Approx(1.0 / 18));
  CHECK(w[1] == doctest::Approx(1.0 / 36));
  w = hamiltonian_coefficients_two_param(f, 0, 1);
  CHECK(w[0] == doctest::Approx(1.0 / 3));
  CHECK(w[1] == doctest::Approx(-1.0 / 3));
  w = hamiltonian_coefficients_two_param(f, -0.25, 0);
  CHECK(w[0] == doctest::Approx(-1.0 / 3));
  CHECK(w[1] == doctest::Approx(4.0 / 3));

  CHECK_THROWS_AS(hamiltonian_coefficients_two_param(FrequencySet{1, 1}, 1, 0), DegeneratePairing);
  CHECK_THROWS_AS(hamiltonian_coefficients_two_param(f, 1, -4), DegeneratePairing);
  CHECK_THROWS_AS(hamiltonian_coefficients_two_param(f, 1, -1), DegeneratePairing);
}

TEST_CASE("solved Hamiltonian weights") {
  const FrequencySet f{1, 2};
  auto sol = solve_hamiltonian_coefficients(f, poisson_tensor_two_param(f, 0, 1));
  REQUIRE(sol.coeffs.size() == 2);
  CHECK(sol.coeffs[0] == doctest::Approx(1.0 / 3).epsilon(1e-12));
  CHECK(sol.coeffs[1] == doctest::Approx(-1.0 / 3).epsilon(1e-12));
  CHECK(sol.residual < 1e-12);

  sol = solve_hamiltonian_coefficients(f, poisson_tensor_general(f));
  CHECK(sol.coeffs[0] == doctest::Approx(1.0 / 18).epsilon(1e-12));
  CHECK(sol.coeffs[1] == doctest::Approx(1.0 / 36).epsilon(1e-12));
  CHECK(sol.residual < 1e-12);

  const FrequencySet one{1};
  sol = solve_hamiltonian_coefficients(one, poisson_tensor_general(one));
  CHECK(sol.coeffs[0] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(sol.residual < 1e-12);

  CHECK_THROWS_AS(solve_hamiltonian_coefficients(f, PoissonTensor::zero(4)), NoUniqueCoefficients);
  try {
    solve_hamiltonian_coefficients(f, PoissonTensor::zero(4));
  } catch (const NoUniqueCoefficients& e) {
    CHECK(e.null_space_dimension() == 2);
  }
  CHECK_THROWS_AS(solve_hamiltonian_coefficients(f, poisson_tensor_general(FrequencySet{1})), DimensionMismatch);
}

TEST_CASE("solved weights agree with the closed form and generate the dynamics") {
  Sampler s(43);
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = s.distinct_frequencies(2);
    const double a = s.uniform(-10, 10), b = s.uniform(-10, 10);
    const auto pt = poisson_tensor_two_param(f, a, b);
    const auto closed = hamiltonian_coefficients_two_param(f, a, b);
    const auto sol = solve_hamiltonian_coefficients(f, pt);
    CHECK(sol.coeffs[0] == doctest::Approx(closed[0]).epsilon(1e-8));
    CHECK(sol.coeffs[1] == doctest::Approx(closed[1]).epsilon(1e-8));
  }
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int trial = 0; trial < 5; ++trial) {
      const auto f = s.distinct_frequencies(n);
      const auto pt = poisson_tensor_general(f);
      const auto sol = solve_hamiltonian_coefficients(f, pt);
      const auto h = weighted_sum(build_integrals(f), sol.coeffs);
      const double r = verify_generates_dynamics(h, pt, build_vector_field(f));
      // at n = 4 the rounding floor eps |Pi| |S_H| already exceeds 1e-10 in absolute terms
      const double scale = n < 4 ? 1.0 : max_abs(pt.matrix()) * max_abs(h.matrix());
      CHECK(r < 1e-10 * scale);
    }
  }
}

TEST_CASE("printed closed-form general weights") {
  const auto printed = printed_general_coefficients(FrequencySet{1, 2});
  CHECK(printed[0] == doctest::Approx(-1.0 / 3));
  CHECK(printed[1] == doctest::Approx(1.0 / 6));
  const FrequencySet f{1, 2};
  const auto h = weighted_sum(build_integrals(f), printed);
  CHECK(verify_generates_dynamics(h, poisson_tensor_general(f), build_vector_field(f)) > 1.0);
  CHECK_THROWS_AS(printed_general_coefficients(FrequencySet{1, 1}), DegenerateFrequencies);
}

TEST_CASE("bi-Hamiltonian representation") {
  const FrequencySet f{1, 2};
  const auto field = build_vector_field(f);
  const auto named = build_named_combinations(f);
  CHECK(verify_generates_dynamics(named.c1, poisson_tensor_two_param(f, -0.25, 0), field) < 1e-12);
  CHECK(verify_generates_dynamics(named.c2, poisson_tensor_two_param(f, 0, 1), field) < 1e-12);

  Sampler s(47);
  const auto h1 = build_integral(f, 1);
  for (int k = 0; k < 50; ++k) {
    const auto pt = poisson_tensor_two_param(f, s.uniform(-10, 10), s.uniform(-10, 10));
    CHECK(verify_generates_dynamics(h1, pt, field) > 1e-3);
  }
}

TEST_CASE("observable algebra") {
  Matrix m(2, 2);
  m << 1, 2, 0, 3;
  const QuadraticObservable q(m);
  CHECK(q.matrix()(0, 1) == 1.0);
  CHECK(q.matrix()(1, 0) == 1.0);
  Vector u(2);
  u << 1, -2;
  const auto sq = QuadraticObservable::half_square(u);
  Vector x(2);
  x << 0.5, 0.25;
  CHECK(sq.value(x) == doctest::Approx(0.0));
  x << 1, 1;
  CHECK(sq.value(x) == doctest::Approx(0.5));
  CHECK((q + sq - sq).value(x) == doctest::Approx(q.value(x)));
  CHECK((2.0 * q).value(x) == doctest::Approx(2 * q.value(x)));
  CHECK_THROWS_AS(q + QuadraticObservable::zero(4), DimensionMismatch);
  CHECK_THROWS_AS(weighted_sum({q}, {1.0, 2.0}), DimensionMismatch);
}
