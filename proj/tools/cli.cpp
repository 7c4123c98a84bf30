#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pu/classical.hpp"
#include "pu/dynamics.hpp"
#include "pu/errors.hpp"
#include "pu/format.hpp"
#include "pu/quantum.hpp"
#include "pu/verify.hpp"

namespace pu::cli {
namespace {

using Json = nlohmann::ordered_json;

/// Raised for malformed command-line values (exit code 2).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a check fails after a report was produced (exit code 1).
struct ReportedFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string freqs;
  std::optional<double> f;
  std::optional<double> g;
  double hbar = 1.0;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  std::string format;  // empty: csv for simulate, json otherwise
  std::string out;

  // simulate
  std::string x0;
  double dt = 0.01;
  std::size_t steps = 1000;
  std::string integrator = "rk4";
  std::string summary;

  // spectrum
  std::vector<std::string> levels;

  // degenerate
  double omega = 0.0;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double parse_double(const std::string& token, const char* what) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (!token.empty() && *first == '+') ++first;
  const auto res = std::from_chars(first, last, v);
  if (token.empty() || res.ec != std::errc() || res.ptr != last) {
    throw InputError(std::string("invalid ") + what + " value '" + token + "'");
  }
  return v;
}

std::vector<double> parse_list(const std::string& text, const char* what) {
  if (text.empty()) throw InputError(std::string(what) + " list is empty");
  std::vector<double> out;
  for (const auto& tok : split(text, ',')) out.push_back(parse_double(tok, what));
  return out;
}

std::vector<std::size_t> parse_occupations(const std::string& text) {
  std::vector<std::size_t> out;
  for (const auto& tok : split(text, ',')) {
    std::size_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw InputError("invalid occupation number '" + tok + "'");
    }
    out.push_back(v);
  }
  return out;
}

FrequencySet parse_frequencies(const std::string& text) {
  return FrequencySet(parse_list(text, "frequency"));
}

// Antisymmetric completion and sign flips leave -0.0 behind; print it as 0.
double unsigned_zero(double v) { return v == 0.0 ? 0.0 : v; }

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(unsigned_zero(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Complex& z) {
  return Json{{"re", unsigned_zero(z.real())}, {"im", unsigned_zero(z.imag())}};
}

Json to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(unsigned_zero(v(i)));
  return arr;
}

Json frequencies_json(const FrequencySet& freqs) {
  Json arr = Json::array();
  for (double w : freqs.values()) arr.push_back(w);
  return arr;
}

Json tensor_json(const PoissonTensor& pt, const LinearVectorField& field) {
  Json doc;
  if (const auto* tp = std::get_if<TwoParameterOrigin>(&pt.origin())) {
    doc["origin"] = "two_param";
    doc["f"] = tp->f;
    doc["g"] = tp->g;
  } else if (std::holds_alternative<GeneralOrigin>(pt.origin())) {
    doc["origin"] = "general";
  } else {
    doc["origin"] = "custom";
  }
  doc["matrix"] = to_json(pt.matrix());
  Json nonzero = Json::object();
  for (std::size_t i = 0; i < pt.dim(); ++i) {
    for (std::size_t j = i + 1; j < pt.dim(); ++j) {
      if (pt(i, j) != 0.0) nonzero[std::to_string(i + 1) + "," + std::to_string(j + 1)] = pt(i, j);
    }
  }
  doc["nonzero"] = std::move(nonzero);
  doc["rank"] = pt.rank();
  doc["lie_derivative_residual"] = lie_derivative_residual(field, pt);
  doc["schouten_residual"] = schouten_residual(pt);
  return doc;
}

Json commutators_json(const quantum::CommutatorSolve& solved) {
  return Json{{"a_i,a_j^+", to_json(solved.comms.c)},
              {"a_i,a_j", to_json(solved.comms.d)},
              {"residual", solved.residual}};
}

void emit(const Options& opt, std::ostream& out, const std::string& text) {
  if (opt.out.empty()) {
    out << text;
    return;
  }
  std::ofstream file(opt.out);
  if (!file) throw InputError("cannot open output file '" + opt.out + "'");
  file << text;
}

void emit_json(const Options& opt, std::ostream& out, const Json& doc) {
  emit(opt, out, doc.dump(2) + "\n");
}

void require_json_format(const Options& opt) {
  if (opt.format != "json") throw InputError("this command only supports --format json");
}

// --- commands ----------------------------------------------------------------

int cmd_structure(const Options& opt, std::ostream& out) {
  require_json_format(opt);
  const auto freqs = parse_frequencies(opt.freqs);
  if (opt.f.has_value() != opt.g.has_value()) throw InputError("--f and --g must be given together");
  if (opt.f && freqs.size() != 2) throw InputError("--f/--g select the fourth order tensor; need two frequencies");
  freqs.require_distinct("structure");

  const auto field = build_vector_field(freqs);
  const auto vars = build_oscillator_variables(freqs);
  const auto integrals = build_integrals(freqs);
  const auto pt = opt.f ? poisson_tensor_two_param(freqs, *opt.f, *opt.g) : poisson_tensor_general(freqs);

  Json doc;
  doc["command"] = "structure";
  doc["frequencies"] = frequencies_json(freqs);
  doc["vector_field"] = to_json(field.a);
  doc["oscillator_variables"] = Json{{"q", to_json(vars.q_rows)}, {"p", to_json(vars.p_rows)}};
  Json ints = Json::array();
  for (std::size_t i = 0; i < integrals.size(); ++i) {
    ints.push_back(Json{{"name", "H" + std::to_string(i + 1)}, {"matrix", to_json(integrals[i].matrix())}});
  }
  doc["integrals"] = std::move(ints);
  if (freqs.size() == 2) {
    const auto named = build_named_combinations(freqs);
    doc["combinations"] = Json{{"H_C", to_json(named.h_canonical->matrix())},
                               {"H_PU", to_json(named.h_pais_uhlenbeck->matrix())},
                               {"C1", to_json(named.c1.matrix())},
                               {"C2", to_json(named.c2.matrix())}};
  }
  doc["poisson_tensor"] = tensor_json(pt, field);

  bool ok = true;
  std::optional<CoefficientSolve> solved;
  try {
    solved = solve_hamiltonian_coefficients(freqs, pt);
    doc["hamiltonian_coefficients"] = Json{{"coefficients", solved->coeffs}, {"residual", solved->residual}};
  } catch (const NoUniqueCoefficients& e) {
    ok = false;
    doc["hamiltonian_coefficients"] =
        Json{{"coefficients", nullptr}, {"error", e.what()}, {"null_space_dimension", e.null_space_dimension()}};
  }

  if (opt.f) {
    try {
      const auto closed = hamiltonian_coefficients_two_param(freqs, *opt.f, *opt.g);
      doc["closed_form_coefficients"] = Json{{"coefficients", closed}};
    } catch (const DegeneratePairing& e) {
      doc["closed_form_coefficients"] = Json{{"coefficients", nullptr}, {"error", e.what()}};
    }
  }

  const auto printed = printed_general_coefficients(freqs);
  const double printed_residual = verify_generates_dynamics(weighted_sum(integrals, printed), pt, field);
  bool matches = false;
  if (solved) {
    matches = true;
    for (std::size_t i = 0; i < printed.size(); ++i) {
      const double c = solved->coeffs[i];
      if (std::abs(printed[i] - c) > opt.tol * std::max(1.0, std::abs(c))) matches = false;
    }
  }
  doc["printed_general_coefficients"] =
      Json{{"coefficients", printed}, {"residual", printed_residual}, {"matches_solved", matches}};

  const quantum::QuantumConfig qc{opt.hbar};
  qc.validate();
  const auto basis = quantum::build_mode_basis(freqs);
  Json quant;
  quant["hbar"] = opt.hbar;
  try {
    quant["literal"] = commutators_json(quantum::solve_mode_commutators(basis, pt, qc));
    quant["unit_scaled"] = commutators_json(quantum::solve_mode_commutators(basis, pt.scaled(1.0 / opt.hbar), qc));
  } catch (const InconsistentQuantization& e) {
    ok = false;
    quant["error"] = e.what();
  }
  doc["quantization"] = std::move(quant);

  emit_json(opt, out, doc);
  if (!ok) throw ReportedFailure("structure report contains unsolvable parts");
  return kSuccess;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
  require_json_format(opt);
  const auto freqs = parse_frequencies(opt.freqs);
  if (!(opt.tol > 0.0)) throw InputError("--tol must be positive");
  verify::SuiteConfig cfg;
  cfg.seed = opt.seed;
  cfg.tolerance = opt.tol;
  cfg.qc.hbar = opt.hbar;
  cfg.qc.validate();
  const auto results = verify::run_suite(freqs, cfg);

  Json checks = Json::array();
  int passed = 0, failed = 0, skipped = 0;
  for (const auto& r : results) {
    Json c;
    c["name"] = r.name;
    c["status"] = verify::to_string(r.status);
    if (r.status == verify::Status::Skip) {
      c["residual"] = nullptr;
    } else {
      c["residual"] = r.residual;
    }
    if (!r.note.empty()) c["note"] = r.note;
    checks.push_back(std::move(c));
    switch (r.status) {
      case verify::Status::Pass: ++passed; break;
      case verify::Status::Fail: ++failed; break;
      case verify::Status::Skip: ++skipped; break;
    }
  }
  Json doc;
  doc["command"] = "verify";
  doc["frequencies"] = frequencies_json(freqs);
  doc["seed"] = opt.seed;
  doc["tolerance"] = opt.tol;
  doc["hbar"] = opt.hbar;
  doc["checks"] = std::move(checks);
  doc["summary"] = Json{{"passed", passed}, {"failed", failed}, {"skipped", skipped}};
  doc["ok"] = failed == 0;
  emit_json(opt, out, doc);

  if (failed > 0) {
    for (const auto& r : results) {
      if (r.status == verify::Status::Fail) err << "failed check: " << r.name << '\n';
    }
    return kVerificationFailure;
  }
  return kSuccess;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  if (opt.format != "csv" && opt.format != "json") throw InputError("--format must be csv or json");
  const auto freqs = parse_frequencies(opt.freqs);
  const auto x0v = parse_list(opt.x0, "initial state");
  if (x0v.size() != freqs.dim()) {
    throw InputError("--x0 needs " + std::to_string(freqs.dim()) + " components, got " +
                     std::to_string(x0v.size()));
  }
  if (!(opt.dt > 0.0)) throw InputError("--dt must be positive");
  const PhaseVector x0 = Eigen::Map<const Vector>(x0v.data(), static_cast<Eigen::Index>(x0v.size()));

  Trajectory traj;
  if (opt.integrator == "rk4") {
    traj = integrate_rk4(build_vector_field(freqs), x0, opt.dt, opt.steps);
  } else if (opt.integrator == "exact") {
    traj = exact_trajectory(freqs, x0, opt.dt, opt.steps);
  } else {
    throw InputError("--integrator must be rk4 or exact");
  }

  std::vector<std::string> names;
  std::vector<QuadraticObservable> observables;
  if (freqs.all_distinct()) {
    const auto hs = build_integrals(freqs);
    for (std::size_t i = 0; i < hs.size(); ++i) {
      names.push_back("H" + std::to_string(i + 1));
      observables.push_back(hs[i]);
    }
  }
  if (freqs.size() == 2) {
    const auto named = build_named_combinations(freqs);
    names.push_back("C1");
    observables.push_back(named.c1);
    names.push_back("C2");
    observables.push_back(named.c2);
  }
  const auto drift = conservation_drift(traj, observables);

  Json summary;
  summary["command"] = "simulate";
  summary["frequencies"] = frequencies_json(freqs);
  summary["integrator"] = opt.integrator;
  summary["dt"] = opt.dt;
  summary["steps"] = opt.steps;
  summary["final_time"] = traj.times.back();
  summary["final_state"] = to_json(traj.states.back());
  Json d = Json::object();
  for (std::size_t i = 0; i < names.size(); ++i) d[names[i]] = drift[i];
  summary["drift"] = std::move(d);

  if (opt.format == "json") {
    Json rows = Json::array();
    for (std::size_t r = 0; r < traj.size(); ++r) {
      Json row = Json::array();
      row.push_back(traj.times[r]);
      for (Eigen::Index k = 0; k < traj.states[r].size(); ++k) row.push_back(traj.states[r](k));
      rows.push_back(std::move(row));
    }
    summary["trajectory"] = std::move(rows);
    emit_json(opt, out, summary);
    return kSuccess;
  }

  std::ostringstream csv;
  write_trajectory_csv(csv, traj);
  emit(opt, out, csv.str());
  const std::string text = summary.dump(2) + "\n";
  if (opt.summary.empty()) {
    err << text;
  } else {
    std::ofstream file(opt.summary);
    if (!file) throw InputError("cannot open summary file '" + opt.summary + "'");
    file << text;
  }
  return kSuccess;
}

int cmd_spectrum(const Options& opt, std::ostream& out) {
  require_json_format(opt);
  const auto freqs = parse_frequencies(opt.freqs);
  const quantum::QuantumConfig qc{opt.hbar};
  qc.validate();
  if (!freqs.all_distinct()) {
    throw DegenerateFrequencies("spectrum needs distinct frequencies; run `pu degenerate --omega <w>` instead");
  }
  std::vector<std::vector<std::size_t>> tuples;
  for (const auto& l : opt.levels) {
    for (const auto& part : split(l, ';')) tuples.push_back(parse_occupations(part));
  }
  if (tuples.empty()) tuples.emplace_back(freqs.size(), 0);
  for (const auto& t : tuples) {
    if (t.size() != freqs.size()) {
      throw InputError("each --levels tuple needs " + std::to_string(freqs.size()) + " entries");
    }
  }

  const auto gq = quantum::quantize_general(freqs, qc);
  Json levels = Json::array();
  double worst = 0.0;
  for (const auto& t : tuples) {
    const double e = quantum::spectrum(freqs, t, qc);
    const double nf = gq.form.evaluate(t);
    worst = std::max(worst, std::abs(e - nf) / std::max(1.0, std::abs(e)));
    levels.push_back(Json{{"occupations", t}, {"energy", e}, {"normal_form_energy", nf}});
  }
  const double diag = std::max(gq.form.offdiag_magnitude(), gq.form.squeeze_magnitude());
  const bool consistent = worst <= opt.tol && diag <= opt.tol * std::max(1.0, opt.hbar);

  Json doc;
  doc["command"] = "spectrum";
  doc["frequencies"] = frequencies_json(freqs);
  doc["hbar"] = opt.hbar;
  doc["levels"] = std::move(levels);
  doc["normal_form_check"] = Json{{"hamiltonian_weights", gq.weights},
                                  {"max_relative_deviation", worst},
                                  {"offdiag_and_squeeze", diag},
                                  {"consistent", consistent}};
  emit_json(opt, out, doc);
  return consistent ? kSuccess : kVerificationFailure;
}

std::string signed_term(double coeff, const std::string& body, bool first) {
  std::string s;
  if (coeff < 0) {
    s = first ? "-" : " - ";
  } else if (!first) {
    s = " + ";
  }
  return s + format_double(std::abs(coeff)) + body;
}

Json degenerate_form_json(const quantum::DegenerateIntegralForm& f) {
  return Json{{"a2^+a2", f.secular_number},
              {"mixing", f.mixing},
              {"expression", signed_term(f.secular_number, "*a2^+a2", true) +
                                 signed_term(f.mixing, "i*(a2 a1^+ - a1 a2^+)", false)},
              {"remainder", f.remainder}};
}

int cmd_degenerate(const Options& opt, std::ostream& out) {
  require_json_format(opt);
  if (!(opt.omega > 0.0) || !std::isfinite(opt.omega)) throw InputError("--omega must be positive");
  const quantum::QuantumConfig qc{opt.hbar};
  qc.validate();
  const auto rep = quantum::degenerate_analysis(opt.omega, qc);

  Json doc;
  doc["command"] = "degenerate";
  doc["omega"] = opt.omega;
  doc["hbar"] = opt.hbar;
  doc["f"] = rep.f;
  doc["g"] = rep.g;
  doc["commutators"] = commutators_json(rep.commutators);
  doc["normal_forms"] = Json{{"C_s1", degenerate_form_json(rep.cs1)}, {"C_s2", degenerate_form_json(rep.cs2)}};
  doc["secular_mode_classical"] = rep.secular_mode_classical;
  emit_json(opt, out, doc);
  return kSuccess;
}

void add_common(CLI::App* sub, Options& opt, bool with_freqs = true) {
  if (with_freqs) sub->add_option("--freqs", opt.freqs, "comma-separated positive frequencies")->required();
  sub->add_option("--hbar", opt.hbar, "reduced Planck constant")->capture_default_str();
  sub->add_option("--tol", opt.tol, "verification tolerance")->capture_default_str();
  sub->add_option("--seed", opt.seed, "seed for randomized sweeps")->envname("PU_SEED")->capture_default_str();
  sub->add_option("--format", opt.format, "output format: json | csv");
  sub->add_option("--out", opt.out, "write the main output to this file");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-Hamiltonian structures of Pais-Uhlenbeck oscillators", "pu"};
  app.require_subcommand(1);
  Options opt;

  auto* structure = app.add_subcommand("structure", "companion field, integrals, Poisson tensor and weights");
  add_common(structure, opt);
  structure->add_option("--f", opt.f, "first tensor parameter (n = 2)");
  structure->add_option("--g", opt.g, "second tensor parameter (n = 2)");

  auto* verify = app.add_subcommand("verify", "run the invariant suite");
  add_common(verify, opt);

  auto* simulate = app.add_subcommand("simulate", "integrate the companion system");
  add_common(simulate, opt);
  simulate->add_option("--x0", opt.x0, "comma-separated initial state x1..x2n")->required();
  simulate->add_option("--dt", opt.dt, "time step")->capture_default_str();
  simulate->add_option("--steps", opt.steps, "number of steps")->capture_default_str();
  simulate->add_option("--integrator", opt.integrator, "rk4 | exact")->capture_default_str();
  simulate->add_option("--summary", opt.summary, "write the JSON drift summary here (default stderr)");

  auto* spectrum = app.add_subcommand("spectrum", "anisotropic oscillator energies");
  add_common(spectrum, opt);
  spectrum->add_option("--levels", opt.levels, "occupation tuple like 1,0 (repeatable, or ';'-separated)");

  auto* degenerate = app.add_subcommand("degenerate", "doubled-frequency fourth order analysis");
  add_common(degenerate, opt, false);
  degenerate->add_option("--omega", opt.omega, "the repeated frequency")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kInvalidInput;
  }
  if (opt.format.empty()) opt.format = simulate->parsed() ? "csv" : "json";

  try {
    if (structure->parsed()) return cmd_structure(opt, out);
    if (verify->parsed()) return cmd_verify(opt, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out, err);
    if (spectrum->parsed()) return cmd_spectrum(opt, out);
    if (degenerate->parsed()) return cmd_degenerate(opt, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DimensionMismatch& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const DegenerateFrequencies& e) {
    err << "error: " << e.what() << '\n';
    return kDegeneracyMisuse;
  } catch (const ReportedFailure& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kVerificationFailure;
  }
  return kInvalidInput;
}

}  // namespace pu::cli
