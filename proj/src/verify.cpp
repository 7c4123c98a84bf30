#include "pu/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "pu/classical.hpp"
#include "pu/dynamics.hpp"
#include "pu/sampling.hpp"
#include "pu/symfun.hpp"

namespace pu::verify {
namespace {

using quantum::QuantumConfig;

enum class Needs { Any, Distinct, FourthOrder, FourthDistinct, FourthDoubled };

struct Check {
  const char* name;
  Needs needs;
  std::function<double(Sampler&)> run;
};

double rel(double residual, double scale) { return residual / std::max(1.0, scale); }

double cmax_abs(const CMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

constexpr int kParameterDraws = 100;
constexpr int kQuantumDraws = 20;

std::vector<Check> build_checks(const FrequencySet& freqs, const QuantumConfig& qc) {
  std::vector<Check> checks;
  const std::size_t n = freqs.size();

  checks.push_back({"symfun.newton_identities", Needs::Any, [=](Sampler&) {
    // k e_k = sum_{i=1..k} (-1)^{i-1} e_{k-i} p_i over the squared frequencies
    const auto sq = freqs.squares();
    std::vector<double> p(n + 1, 0.0);
    for (std::size_t k = 1; k <= n; ++k) {
      for (double v : sq) p[k] += std::pow(v, static_cast<double>(k));
    }
    std::vector<double> e(n + 1, 0.0);
    e[0] = 1.0;
    double worst = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      double s = 0.0;
      for (std::size_t i = 1; i <= k; ++i) s += ((i % 2 == 1) ? 1.0 : -1.0) * e[k - i] * p[i];
      e[k] = s / static_cast<double>(k);
      const double direct = symfun::elementary_symmetric(freqs, k);
      worst = std::max(worst, rel(std::abs(e[k] - direct), std::abs(direct)));
    }
    return worst;
  }});

  checks.push_back({"symfun.reduced_recurrence", Needs::Any, [=](Sampler&) {
    double worst = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      const double w2 = freqs[i - 1] * freqs[i - 1];
      for (std::size_t j = 0; j < n; ++j) {
        const double full = symfun::elementary_symmetric(freqs, j + 1);
        const double head = (j + 1 < n) ? symfun::reduced_elementary_symmetric(freqs, i, j + 1) : 0.0;
        const double tail = w2 * symfun::reduced_elementary_symmetric(freqs, i, j);
        worst = std::max(worst, rel(std::abs(full - head - tail), std::abs(full)));
      }
    }
    return worst;
  }});

  checks.push_back({"classical.antisymmetry", Needs::Any, [=](Sampler& s) {
    double worst = max_abs(poisson_tensor_general(freqs).matrix() +
                           poisson_tensor_general(freqs).matrix().transpose());
    if (n == 2) {
      for (int k = 0; k < 10; ++k) {
        const auto pt = poisson_tensor_two_param(freqs, s.uniform(-10, 10), s.uniform(-10, 10));
        worst = std::max(worst, max_abs(pt.matrix() + pt.matrix().transpose()));
      }
    }
    return worst;
  }});

  checks.push_back({"classical.schouten", Needs::Any, [=](Sampler&) {
    return schouten_residual(poisson_tensor_general(freqs));
  }});

  checks.push_back({"classical.lie_derivative_general", Needs::Any, [=](Sampler&) {
    const auto field = build_vector_field(freqs);
    const auto pt = poisson_tensor_general(freqs);
    return rel(lie_derivative_residual(field, pt), max_abs(field.a) * max_abs(pt.matrix()));
  }});

  checks.push_back({"classical.conservation", Needs::Distinct, [=](Sampler&) {
    const auto field = build_vector_field(freqs);
    double worst = 0.0;
    for (const auto& h : build_integrals(freqs)) {
      const double r = max_abs(directional_derivative(h, field).matrix());
      worst = std::max(worst, rel(r, max_abs(h.matrix()) * max_abs(field.a)));
    }
    return worst;
  }});

  checks.push_back({"classical.solved_weights_generate_dynamics", Needs::Distinct, [=](Sampler&) {
    const auto pt = poisson_tensor_general(freqs);
    const auto solved = solve_hamiltonian_coefficients(freqs, pt);
    const auto h = weighted_sum(build_integrals(freqs), solved.coeffs);
    return rel(solved.residual, max_abs(pt.matrix()) * max_abs(h.matrix()));
  }});

  checks.push_back({"classical.sum_difference_identities", Needs::FourthDistinct, [=](Sampler&) {
    const auto named = build_named_combinations(freqs);
    const auto h1 = build_integral(freqs, 1).matrix();
    const auto h2 = build_integral(freqs, 2).matrix();
    const double scale = std::max(max_abs(h1), max_abs(h2));
    return rel(std::max(max_abs(named.h_canonical->matrix() - (h1 + h2)),
                        max_abs(named.h_pais_uhlenbeck->matrix() - (h1 - h2))),
               scale);
  }});

  checks.push_back({"classical.combination_identities", Needs::FourthDistinct, [=](Sampler&) {
    const auto named = build_named_combinations(freqs);
    const auto h1 = build_integral(freqs, 1).matrix();
    const auto h2 = build_integral(freqs, 2).matrix();
    const double w1 = freqs[0] * freqs[0];
    const double w2 = freqs[1] * freqs[1];
    const Matrix c1 = (w1 * h1 - w2 * h2) / (w1 - w2);
    const Matrix c2 = -(h1 - h2) / (w1 - w2);
    return rel(std::max(max_abs(named.c1.matrix() - c1), max_abs(named.c2.matrix() - c2)),
               std::max(max_abs(c1), max_abs(c2)));
  }});

  checks.push_back({"classical.involution", Needs::FourthOrder, [=](Sampler& s) {
    const auto named = build_named_combinations(freqs);
    double worst = 0.0;
    for (int k = 0; k < kParameterDraws; ++k) {
      const auto pt = poisson_tensor_two_param(freqs, s.uniform(-10, 10), s.uniform(-10, 10));
      const double r = max_abs(poisson_bracket(named.c1, named.c2, pt).matrix());
      worst = std::max(worst, rel(r, max_abs(named.c1.matrix()) * max_abs(pt.matrix()) *
                                         max_abs(named.c2.matrix())));
    }
    return worst;
  }});

  checks.push_back({"classical.lie_derivative_two_param", Needs::FourthOrder, [=](Sampler& s) {
    const auto field = build_vector_field(freqs);
    double worst = 0.0;
    for (int k = 0; k < kParameterDraws; ++k) {
      const auto pt = poisson_tensor_two_param(freqs, s.uniform(-10, 10), s.uniform(-10, 10));
      worst = std::max(worst, rel(lie_derivative_residual(field, pt),
                                  max_abs(field.a) * max_abs(pt.matrix())));
    }
    return worst;
  }});

  checks.push_back({"classical.bilinearity", Needs::FourthOrder, [=](Sampler& s) {
    const double f = s.uniform(-10, 10);
    const double g = s.uniform(-10, 10);
    const Matrix lhs = poisson_tensor_two_param(freqs, f, g).matrix();
    const Matrix rhs = f * poisson_tensor_two_param(freqs, 1, 0).matrix() +
                       g * poisson_tensor_two_param(freqs, 0, 1).matrix();
    return rel(max_abs(lhs - rhs), max_abs(lhs));
  }});

  checks.push_back({"classical.general_equals_two_param", Needs::FourthOrder, [=](Sampler&) {
    const Matrix general = poisson_tensor_general(freqs).matrix();
    const Matrix two = poisson_tensor_two_param(freqs, symfun::power_sum_tau(freqs, 1),
                                                -symfun::power_sum_tau(freqs, 3))
                           .matrix();
    return rel(max_abs(general - two), max_abs(general));
  }});

  checks.push_back({"classical.bi_hamiltonian", Needs::FourthOrder, [=](Sampler&) {
    const auto field = build_vector_field(freqs);
    const auto named = build_named_combinations(freqs);
    const double w1 = freqs[0] * freqs[0];
    const double w2 = freqs[1] * freqs[1];
    const auto pi1 = poisson_tensor_two_param(freqs, -1.0 / (w1 * w2), 0.0);
    const auto pi2 = poisson_tensor_two_param(freqs, 0.0, 1.0);
    return rel(std::max(verify_generates_dynamics(named.c1, pi1, field),
                        verify_generates_dynamics(named.c2, pi2, field)),
               max_abs(field.a));
  }});

  checks.push_back({"classical.closed_form_weights", Needs::FourthDistinct, [=](Sampler& s) {
    double worst = 0.0;
    for (int k = 0; k < kQuantumDraws; ++k) {
      const double f = s.uniform(-10, 10);
      const double g = s.uniform(-10, 10);
      const auto closed = hamiltonian_coefficients_two_param(freqs, f, g);
      const auto solved = solve_hamiltonian_coefficients(freqs, poisson_tensor_two_param(freqs, f, g));
      for (std::size_t i = 0; i < 2; ++i) {
        worst = std::max(worst, rel(std::abs(closed[i] - solved.coeffs[i]), std::abs(closed[i])));
      }
    }
    return worst;
  }});

  checks.push_back({"classical.degenerate_limit", Needs::FourthDoubled, [=](Sampler&) {
    const auto named = build_named_combinations(freqs);
    const auto cs = build_degenerate_integrals(freqs[0]);
    return rel(std::max(max_abs(named.c1.matrix() - cs[0].matrix()),
                        max_abs(named.c2.matrix() - cs[1].matrix())),
               max_abs(cs[0].matrix()));
  }});

  checks.push_back({"dynamics.time_reversal", Needs::Any, [=](Sampler& s) {
    const auto x0 = s.state(freqs.dim());
    const auto xt = exact_solution(freqs, x0, 3.7);
    return max_abs(exact_solution(freqs, xt, -3.7) - x0);
  }});

  checks.push_back({"dynamics.exact_conservation", Needs::Distinct, [=](Sampler& s) {
    const auto traj = exact_trajectory(freqs, s.state(freqs.dim()), 0.1, 100);
    const auto drift = conservation_drift(traj, build_integrals(freqs));
    return *std::max_element(drift.begin(), drift.end());
  }});

  checks.push_back({"dynamics.degenerate_conservation", Needs::FourthDoubled, [=](Sampler& s) {
    const auto cs = build_degenerate_integrals(freqs[0]);
    const auto field = build_vector_field(freqs);
    double worst = 0.0;
    for (const auto& c : cs) {
      worst = std::max(worst, rel(max_abs(directional_derivative(c, field).matrix()),
                                  max_abs(c.matrix()) * max_abs(field.a)));
    }
    const auto traj = exact_trajectory(freqs, s.state(freqs.dim()), 0.1, 100);
    for (double d : conservation_drift(traj, {cs[0], cs[1]})) worst = std::max(worst, d);
    return worst;
  }});

  checks.push_back({"quantum.reconstruction", Needs::Distinct, [=](Sampler& s) {
    const auto basis = quantum::build_mode_basis(freqs);
    std::vector<PoissonTensor> tensors;
    if (n == 2) {
      for (int k = 0; k < kQuantumDraws; ++k) {
        tensors.push_back(poisson_tensor_two_param(freqs, s.uniform(-10, 10), s.uniform(-10, 10)));
      }
    } else {
      tensors.push_back(poisson_tensor_general(freqs));
    }
    double worst = 0.0;
    for (const auto& pt : tensors) {
      const auto solved = quantum::solve_mode_commutators(basis, pt, qc);
      const double scale = qc.hbar * max_abs(pt.matrix());
      worst = std::max({worst, rel(solved.residual, scale),
                        rel(cmax_abs(solved.comms.d), cmax_abs(solved.comms.c))});
    }
    return worst;
  }});

  checks.push_back({"quantum.normalization_fixed_point", Needs::FourthDistinct, [=](Sampler&) {
    const auto [f, g] = quantum::fix_normalizing_parameters(freqs, qc);
    const auto solved = quantum::solve_mode_commutators(
        quantum::build_mode_basis(freqs), poisson_tensor_two_param(freqs, f, g), qc);
    return std::max(cmax_abs(solved.comms.c - CMatrix::Identity(2, 2)), cmax_abs(solved.comms.d));
  }});

  checks.push_back({"quantum.conserved_diagonality", Needs::Distinct, [=](Sampler&) {
    const auto basis = quantum::build_mode_basis(freqs);
    const auto unit = quantum::unit_commutators(n);
    auto observables = build_integrals(freqs);
    if (n == 2) {
      const auto named = build_named_combinations(freqs);
      observables.push_back(named.c1);
      observables.push_back(named.c2);
    }
    const double m2 = cmax_abs(basis.m) * cmax_abs(basis.m);
    double worst = 0.0;
    for (const auto& obs : observables) {
      const auto form = quantum::normal_form(obs, basis, unit);
      const double scale = max_abs(obs.matrix()) * m2;
      worst = std::max(worst, rel(std::max(form.offdiag_magnitude(), form.squeeze_magnitude()), scale));
    }
    return worst;
  }});

  checks.push_back({"quantum.linearity", Needs::Distinct, [=](Sampler& s) {
    const auto basis = quantum::build_mode_basis(freqs);
    const auto unit = quantum::unit_commutators(n);
    const auto hs = build_integrals(freqs);
    const auto& a = hs.front();
    const auto& b = hs.back();
    const double alpha = s.uniform(-3, 3);
    const double beta = s.uniform(-3, 3);
    const auto fa = quantum::normal_form(a, basis, unit);
    const auto fb = quantum::normal_form(b, basis, unit);
    const auto fab = quantum::normal_form(alpha * a + beta * b, basis, unit);
    double worst = std::abs(fab.zero_point - alpha * fa.zero_point - beta * fb.zero_point);
    double scale = std::abs(fab.zero_point);
    for (std::size_t i = 0; i < n; ++i) {
      const double expect = alpha * fa.number_coeffs[i] + beta * fb.number_coeffs[i];
      worst = std::max(worst, std::abs(fab.number_coeffs[i] - expect));
      scale = std::max(scale, std::abs(expect));
    }
    worst = std::max(worst, cmax_abs(fab.offdiag_number - alpha * fa.offdiag_number - beta * fb.offdiag_number));
    worst = std::max(worst, cmax_abs(fab.squeeze - alpha * fa.squeeze - beta * fb.squeeze));
    return rel(worst, scale);
  }});

  checks.push_back({"quantum.spectrum_consistency", Needs::Distinct, [=](Sampler& s) {
    const auto gq = quantum::quantize_general(freqs, qc);
    // N = M^H S M carries cancellations of size |S| |M|^2
    const double floor_scale = max_abs(gq.hamiltonian.matrix()) * cmax_abs(gq.basis.m) * cmax_abs(gq.basis.m);
    double worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      std::vector<std::size_t> occ(n);
      for (auto& o : occ) o = static_cast<std::size_t>(s.uniform(0, 6));
      const double e = quantum::spectrum(freqs, occ, qc);
      worst = std::max(worst, rel(std::abs(gq.form.evaluate(occ) - e), std::max(std::abs(e), floor_scale)));
    }
    return worst;
  }});

  checks.push_back({"quantum.degenerate_commutation", Needs::FourthDoubled, [=](Sampler& s) {
    // [a_2, a_2^+] = 0 for every (f, g); [a_1, a_1^+] and [a_1, a_2^+] follow
    // hbar (3 w^2 f + g) / (4 w^3) and -i hbar (w^2 f + g) / (4 w^2).
    const double w = freqs[0];
    const auto basis = quantum::build_mode_basis(freqs);
    double worst = 0.0;
    for (int k = 0; k < kQuantumDraws; ++k) {
      const double f = s.uniform(-10, 10);
      const double g = s.uniform(-10, 10);
      const auto solved = quantum::solve_mode_commutators(basis, poisson_tensor_two_param(freqs, f, g), qc);
      const auto& c = solved.comms.c;
      const double c11 = qc.hbar * (3 * w * w * f + g) / (4 * w * w * w);
      const Complex c12(0.0, -qc.hbar * (w * w * f + g) / (4 * w * w));
      const double dev = std::max({std::abs(c(1, 1)), std::abs(c(0, 0) - c11), std::abs(c(0, 1) - c12),
                                   cmax_abs(solved.comms.d)});
      worst = std::max(worst, rel(dev, std::abs(c11) + std::abs(c12)));
    }
    return worst;
  }});

  checks.push_back({"quantum.degenerate_normal_forms", Needs::FourthDoubled, [=](Sampler&) {
    const double w = freqs[0];
    const auto rep = quantum::degenerate_analysis(w, qc);
    const auto& c = rep.commutators.comms.c;
    const double w2 = w * w;
    double worst = std::max({std::abs(c(0, 0) - 1.0), std::abs(c(1, 1)), std::abs(c(0, 1)),
                             cmax_abs(rep.commutators.comms.d)});
    const double scale = 16 * w2 * w2;
    worst = std::max(worst, rel(std::abs(rep.cs1.secular_number - 16 * w2 * w2), scale));
    worst = std::max(worst, rel(std::abs(rep.cs1.mixing - 4 * w2 * w2 * w), scale));
    worst = std::max(worst, rel(std::abs(rep.cs2.secular_number + 8 * w2), scale));
    worst = std::max(worst, rel(std::abs(rep.cs2.mixing + 4 * w2 * w), scale));
    worst = std::max({worst, rel(rep.cs1.remainder, scale), rel(rep.cs2.remainder, scale)});
    return worst;
  }});

  return checks;
}

const char* skip_reason(Needs needs, const FrequencySet& freqs) {
  const bool distinct = freqs.all_distinct();
  const bool fourth = freqs.size() == 2;
  switch (needs) {
    case Needs::Any:
      return nullptr;
    case Needs::Distinct:
      return distinct ? nullptr : "requires distinct frequencies";
    case Needs::FourthOrder:
      return fourth ? nullptr : "fourth order (n = 2) only";
    case Needs::FourthDistinct:
      if (!fourth) return "fourth order (n = 2) only";
      return distinct ? nullptr : "requires distinct frequencies";
    case Needs::FourthDoubled:
      if (!fourth) return "doubled-frequency analysis covers n = 2 only";
      return distinct ? "requires omega_1 = omega_2" : nullptr;
  }
  return nullptr;
}

}  // namespace

const char* to_string(Status s) {
  switch (s) {
    case Status::Pass:
      return "pass";
    case Status::Fail:
      return "fail";
    case Status::Skip:
      return "skip";
  }
  return "unknown";
}

std::vector<CheckResult> run_suite(const FrequencySet& freqs, const SuiteConfig& cfg) {
  cfg.qc.validate();
  const auto checks = build_checks(freqs, cfg.qc);
  std::vector<CheckResult> out;
  out.reserve(checks.size());
  for (std::size_t k = 0; k < checks.size(); ++k) {
    CheckResult r;
    r.name = checks[k].name;
    if (const char* why = skip_reason(checks[k].needs, freqs)) {
      r.status = Status::Skip;
      r.note = why;
      out.push_back(std::move(r));
      continue;
    }
    // Independent stream per check so results do not depend on which
    // other checks ran.
    Sampler sampler(cfg.seed ^ (0x9E3779B97F4A7C15ull * (k + 1)));
    try {
      r.residual = checks[k].run(sampler);
      r.status = (std::isfinite(r.residual) && r.residual <= cfg.tolerance) ? Status::Pass : Status::Fail;
    } catch (const std::exception& e) {
      r.status = Status::Fail;
      r.residual = std::numeric_limits<double>::infinity();
      r.note = e.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::none_of(results.begin(), results.end(),
                      [](const CheckResult& r) { return r.status == Status::Fail; });
}

}  // namespace pu::verify
