#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "csim/classify.hpp"
#include "csim/generate.hpp"
#include "csim/json_io.hpp"
#include "csim/moments.hpp"
#include "csim/similarity.hpp"

namespace csim::cli {

using io::json;

enum ExitCode : int { kPass = 0, kVerificationFailure = 1, kMalformedInput = 2, kPreconditionViolation = 3 };

struct JobConfig {
  std::string command;
  std::string input;
  std::string output;
  double tol = 1e-9;
  std::optional<std::size_t> rho;
  double gamma = 1.5;
  double delta = 1e-3;
  std::uint64_t seed = 1;
  std::size_t d = 0;
};

namespace detail {

inline json read_json(const std::string& path) {
  if (path.empty()) throw InputError("--input is required");
  std::ifstream f(path);
  if (!f) throw InputError("cannot open input file: " + path);
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw InputError("cannot open output file: " + path);
  f << text;
}

/// Artifact goes to --output when given (summary on `out`), else to `out`.
inline void emit(const JobConfig& cfg, const json& artifact, const std::string& summary, std::ostream& out) {
  if (cfg.output.empty()) {
    out << artifact.dump(2) << '\n';
  } else {
    write_text(cfg.output, artifact.dump(2) + "\n");
    out << summary;
  }
}

inline std::string sci(double x) {
  std::ostringstream s;
  s << std::scientific << std::setprecision(3) << x;
  return s.str();
}

inline Tridiagonal class_matrix_from(const io::OperatorInput& op, double tol) {
  const auto check = is_class_matrix(op.dense, tol);
  if (!check.member) throw PreconditionError(Hypothesis::class_membership, check.message());
  return *check.matrix;
}

inline std::size_t resolve_rho(const JobConfig& cfg, std::size_t d) {
  if (!cfg.rho) return 2 * d + 1;
  if (*cfg.rho <= 2 * d) throw InputError("--rho must exceed 2d = " + std::to_string(2 * d));
  return *cfg.rho;
}

inline RadiusSchedule schedule_of(const JobConfig& cfg) { return {cfg.gamma, cfg.delta}; }

inline std::string csv_path(const std::string& output) {
  std::filesystem::path p(output);
  p.replace_extension(".csv");
  return p.string();
}

template <class C>
std::string atom_csv(const AtomicMeasure<C>& mu) {
  std::ostringstream s;
  s << "re,im,mass\n" << std::setprecision(17);
  for (const auto& a : mu.atoms()) {
    const auto z = to_cplx(a.z);
    s << z.real() << ',' << z.imag() << ',' << to_double(a.mass) << '\n';
  }
  return s.str();
}

}  // namespace detail

/// Class membership, J-symmetry and the Gram-determinant condition, as far as
/// the input supplies the data for them. With a conjugation present the
/// verdict is J-symmetry plus (when x0 is given) the Gram condition;
/// otherwise it is tridiagonal class membership.
inline int cmd_classify(const JobConfig& cfg, std::ostream& out) {
  const auto op = io::operator_from_json(detail::read_json(cfg.input));
  json report;
  const auto check = is_class_matrix(op.dense, cfg.tol);
  report["class_member"] = check.member;
  report["class_message"] = check.message();
  if (check.member) report["tridiagonal"] = io::to_json(*check.matrix);
  bool pass = check.member;
  std::string summary = "class membership: " + std::string(check.member ? "pass" : "fail (" + check.message() + ")") + "\n";

  if (op.conjugation) {
    const double residual = verify_j_symmetric(op.dense, *op.conjugation);
    const double scale = max_abs(op.dense);
    const bool ok = residual <= cfg.tol * scale;
    report["j_symmetry"] = {{"residual", residual}, {"scale", scale}, {"passes", ok}};
    pass = ok;
    summary += "J-symmetry residual " + detail::sci(residual) + ": " + (ok ? "pass" : "fail") + "\n";
    if (op.x0) {
      const auto gram = gram_condition_check(op.dense, *op.x0, *op.conjugation, cfg.tol);
      report["gram"] = io::to_json(gram);
      pass = pass && gram.passes;
      summary += "Gram condition max relative " + detail::sci(gram.max_relative()) + ": " +
                 (gram.passes ? "pass" : "fail") + "\n";
    }
  }
  report["passes"] = pass;
  detail::emit(cfg, report, summary, out);
  return pass ? kPass : kVerificationFailure;
}

inline int cmd_canonicalize(const JobConfig& cfg, std::ostream& out) {
  const auto op = io::operator_from_json(detail::read_json(cfg.input));
  if (!op.conjugation) throw InputError("canonicalize needs a conjugation C");
  const CVector x0 = op.x0 ? *op.x0 : unit_vector(op.dim(), 0);
  const auto form = canonicalize(op.dense, x0, *op.conjugation, cfg.tol);
  detail::emit(cfg, io::to_json(form), "canonical form written\n", out);
  return kPass;
}

inline int cmd_moments(const JobConfig& cfg, std::ostream& out) {
  const auto op = io::operator_from_json(detail::read_json(cfg.input));
  const auto m = detail::class_matrix_from(op, cfg.tol);
  const auto s = spectral_moments<hp_complex>(m, detail::resolve_rho(cfg, m.dim()), 0, cfg.tol);
  detail::emit(cfg, io::to_json(s), "moments s_0..s_" + std::to_string(s.rho()) + " written\n", out);
  return kPass;
}

inline int cmd_solve(const JobConfig& cfg, std::ostream& out) {
  const auto s = io::moments_from_json<hp_complex>(detail::read_json(cfg.input));
  const auto mu = s.rho() == 1 ? solve_rho1<hp_complex>(s.s0(), s[1]) : algorithm1(s, detail::schedule_of(cfg)).measure;
  const auto residuals = verify_measure(mu, s);
  const double worst = max_residual(residuals);
  const bool pass = worst <= cfg.tol;

  json artifact = io::to_json(mu);
  artifact["residuals"] = residuals;
  artifact["max_residual"] = worst;
  artifact["passes"] = pass;
  std::string summary = "atoms: " + std::to_string(mu.size()) + "\n";
  for (std::size_t k = 0; k < residuals.size(); ++k)
    summary += "residual[" + std::to_string(k) + "] = " + detail::sci(residuals[k]) + "\n";
  summary += std::string(pass ? "pass" : "fail") + " at tol " + detail::sci(cfg.tol) + "\n";
  detail::emit(cfg, artifact, summary, out);
  if (!cfg.output.empty()) detail::write_text(detail::csv_path(cfg.output), detail::atom_csv(mu));
  return pass ? kPass : kVerificationFailure;
}

inline int cmd_similarity(const JobConfig& cfg, std::ostream& out) {
  const auto op = io::operator_from_json(detail::read_json(cfg.input));
  const auto m = detail::class_matrix_from(op, cfg.tol);
  TransformOptions opts;
  opts.rho = detail::resolve_rho(cfg, m.dim());
  opts.schedule = detail::schedule_of(cfg);
  opts.eps = cfg.tol;
  const auto data = build_transform<hp_complex>(m, opts);
  const auto report = verify_similarity(data, cfg.tol);
  const double smin = check_invertible(data);

  json artifact = io::to_json(data);
  artifact["report"] = io::to_json(report);
  artifact["orthonormality_residual"] = orthonormality_residual(m, data.measure, m.dim());
  artifact["node_min_singular_value"] = smin;
  std::string summary;
  for (std::size_t k = 0; k < report.residuals.size(); ++k)
    summary += "residual[e_" + std::to_string(k) + "] = " + detail::sci(report.residuals[k]) + "\n";
  summary += "atoms: " + std::to_string(data.measure.size()) + ", node matrix smallest singular value " +
             detail::sci(smin) + "\n";
  summary += std::string(report.passes ? "pass" : "fail") + " at tol " + detail::sci(cfg.tol) + "\n";
  detail::emit(cfg, artifact, summary, out);
  if (!cfg.output.empty()) detail::write_text(detail::csv_path(cfg.output), detail::atom_csv(data.measure));
  return report.passes ? kPass : kVerificationFailure;
}

/// Re-checks a stored artifact: either {"measure", "moments"} against each
/// other, or a similarity artifact (matrix + measure) against the rank-one
/// identity.
inline int cmd_verify(const JobConfig& cfg, std::ostream& out) {
  const auto j = detail::read_json(cfg.input);
  if (!j.is_object() || !j.contains("measure")) throw InputError("verify input needs a measure");
  const auto mu = io::measure_from_json<hp_complex>(j["measure"]);
  json report;
  bool pass = false;
  std::string summary;
  if (j.contains("matrix")) {
    const auto op = io::operator_from_json(j["matrix"]);
    const auto m = detail::class_matrix_from(op, cfg.tol);
    SimilarityData<hp_complex> data;
    data.matrix = m;
    data.measure = mu;
    data.polys = build_polynomials<hp_complex>(m, m.dim(), cfg.tol);
    data.rank_one_scale = from_cplx<hp_complex>(extend_matrix(m, m.dim() + 1).offdiag(m.dim() - 1));
    const auto rep = verify_similarity(data, cfg.tol);
    report = io::to_json(rep);
    pass = rep.passes;
    summary = "similarity max residual " + detail::sci(rep.max_residual) + ": " + (pass ? "pass" : "fail") + "\n";
  } else if (j.contains("moments")) {
    const auto s = io::moments_from_json<hp_complex>(j["moments"]);
    const auto residuals = verify_measure(mu, s);
    const double worst = max_residual(residuals);
    pass = worst <= cfg.tol;
    report = {{"residuals", residuals}, {"max_residual", worst}, {"tol", cfg.tol}, {"passes", pass}};
    summary = "moment max residual " + detail::sci(worst) + ": " + (pass ? "pass" : "fail") + "\n";
  } else {
    throw InputError("verify input needs moments or matrix next to the measure");
  }
  detail::emit(cfg, report, summary, out);
  return pass ? kPass : kVerificationFailure;
}

inline int cmd_gen(const JobConfig& cfg, std::ostream& out) {
  if (cfg.d < 2) throw InputError("--d must be at least 2");
  const auto m = random_class_matrix(cfg.seed, cfg.d);
  detail::emit(cfg, io::to_json(m), "generated d=" + std::to_string(cfg.d) + " seed=" + std::to_string(cfg.seed) + "\n",
               out);
  return kPass;
}

/// Dispatches a command and maps errors onto the exit-code contract.
inline int run(const JobConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (!(cfg.tol > 0)) throw InputError("--tol must be positive");
    if (cfg.command == "classify") return cmd_classify(cfg, out);
    if (cfg.command == "canonicalize") return cmd_canonicalize(cfg, out);
    if (cfg.command == "moments") return cmd_moments(cfg, out);
    if (cfg.command == "solve") return cmd_solve(cfg, out);
    if (cfg.command == "similarity") return cmd_similarity(cfg, out);
    if (cfg.command == "verify") return cmd_verify(cfg, out);
    if (cfg.command == "gen") return cmd_gen(cfg, out);
    throw InputError("unknown command: " + cfg.command);
  } catch (const PreconditionError& e) {
    err << "precondition violated [" << to_string(e.hypothesis()) << "]: " << e.what() << '\n';
    return kPreconditionViolation;
  } catch (const InputError& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const json::exception& e) {
    err << "malformed input: " << e.what() << '\n';
    return kMalformedInput;
  } catch (const ConsistencyError& e) {
    err << "verification failed: " << e.what() << '\n';
    return kVerificationFailure;
  }
}

}  // namespace csim::cli
