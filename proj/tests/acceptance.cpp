// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "csim/cli.hpp"
#include "oracles.hpp"

using namespace csim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

double rel(const hp_complex& got, const hp_complex& want) {
  const double scale = std::max(1.0, to_double(modulus(want)));
  return to_double(modulus(hp_complex(got - want))) / scale;
}

std::vector<Tridiagonal> matrix_family() {
  std::mt19937_64 rng(20240501);
  std::vector<Tridiagonal> out;
  for (int t = 0; t < 100; ++t) out.push_back(random_class_matrix(rng, 2 + t % 5));
  return out;
}

Verdict golden_solve() {
  Verdict v;
  const auto dir = std::filesystem::temp_directory_path() / "csim_acceptance";
  std::filesystem::create_directories(dir);
  const auto in = (dir / "moments.json").string();
  const auto out = (dir / "measure.json").string();
  std::ofstream(in) << R"({"rho": 2, "s": [[1, 0], [1, 1], [0, 3]]})";

  cli::JobConfig cfg{.command = "solve", .input = in, .output = out, .tol = 1e-10};
  std::ostringstream sink;
  const auto t0 = Clock::now();
  const int code = cli::run(cfg, sink, sink);
  const double elapsed = seconds_since(t0);

  v.require(code == cli::kPass, "solve exit code " + std::to_string(code));
  const auto s = MomentSequence<hp_complex>({hp_complex(1), hp_complex(1, 1), hp_complex(0, 3)});
  const auto sol = algorithm1(s);
  v.require(sol.first.z == hp_complex(2, 2) && sol.first.mass == hp_real("0.5"), "step-1 atom is not (2+2i, 1/2)");
  const double worst = max_residual(verify_measure(sol.measure, s));
  v.require(worst <= 1e-10, "moment residual " + cli::detail::sci(worst));
  v.require(elapsed < 0.1, "runtime " + std::to_string(elapsed) + " s");
  std::filesystem::remove_all(dir);
  if (v.pass) v.detail = "max residual " + cli::detail::sci(worst) + ", " + std::to_string(elapsed) + " s";
  return v;
}

Verdict explicit_measure() {
  Verdict v;
  std::vector<Atom<hp_complex>> atoms;
  for (const auto& [z, m] : oracle::example_measure()) atoms.push_back({from_cplx<hp_complex>(z), hp_real(m)});
  const auto residuals = verify_measure(AtomicMeasure<hp_complex>(atoms),
                                        MomentSequence<hp_complex>({hp_complex(1), hp_complex(1, 1), hp_complex(0, 3)}));
  const double worst = max_residual(residuals);
  v.require(worst <= 1e-12, "residual " + cli::detail::sci(worst));
  v.detail = "max residual " + cli::detail::sci(worst);
  return v;
}

Verdict gadget_exactness() {
  Verdict v;
  const double delta = RadiusSchedule{}.delta;
  std::mt19937_64 rng(7777);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 200; ++t) {
    const double s0d = 2.0 * (1.0 - u01(rng));  // (0, 2]
    const double cm = 10.0 * u01(rng);
    const cplx cd = std::polar(cm, 2.0 * pi<double>() * u01(rng));
    const std::size_t n = 2 + static_cast<std::size_t>(u01(rng) * 7.0) % 7;
    const hp_real s0(s0d);
    const hp_complex c = from_cplx<hp_complex>(cd);
    const auto r = scheduled_radius<hp_complex>(s0, c, n, delta);
    const auto sol = solve_gap_moments<hp_complex>(s0, c, n, r, delta);
    const AtomicMeasure<hp_complex> mu(sol.atoms);
    const hp_real floor = 2 * hp_real(delta) * s0 / hp_real(2 * n + 1);
    for (const auto& a : sol.atoms) v.require(a.mass >= floor * hp_real("0.999999"), "mass below floor");
    for (std::size_t k = 0; k <= n; ++k) {
      const hp_complex want = k == 0 ? hp_complex(s0) : (k == n ? c : hp_complex(0));
      const double scale = std::max(to_double(s0), to_double(modulus(want)));
      worst = std::max(worst, to_double(modulus(hp_complex(mu.moment(k) - want))) / scale);
    }
    v.require(toeplitz_solvability(sol.ctilde()) >= hp_real(2 * delta - delta * delta), "Toeplitz determinant too small");
  }
  v.require(worst <= 1e-11, "moment residual " + cli::detail::sci(worst));
  if (v.pass) v.detail = "200 cases, max relative residual " + cli::detail::sci(worst);
  return v;
}

Verdict similarity_suite(const std::vector<Tridiagonal>& family) {
  Verdict v;
  double orth = 0.0, basis = 0.0, sim = 0.0, smin = 1e300;
  const auto t0 = Clock::now();
  for (const auto& m : family) {
    const std::size_t d = m.dim();
    SimilarityData<hp_complex> data;
    try {
      data = build_transform<hp_complex>(m);
    } catch (const Error& e) {
      v.require(false, std::string("build_transform threw: ") + e.what());
      continue;
    }
    orth = std::max(orth, orthonormality_residual(m, data.measure, d));
    for (std::size_t k = 0; k < d; ++k) {
      const auto e = poly_of_operator_vector(m, data.polys, k);
      for (std::size_t i = 0; i < d; ++i) basis = std::max(basis, rel(e[i], hp_complex(i == k ? 1 : 0)));
    }
    sim = std::max(sim, verify_similarity(data).max_residual);
    smin = std::min(smin, check_invertible(data));
    v.require(data.measure.size() > 2 * d, "atom count not above 2d");
  }
  const double elapsed = seconds_since(t0);
  v.require(orth <= 1e-8, "orthonormality " + cli::detail::sci(orth));
  v.require(basis <= 1e-9, "p_k(A) e_0 deviation " + cli::detail::sci(basis));
  v.require(sim <= 1e-8, "similarity residual " + cli::detail::sci(sim));
  v.require(smin > 0.0, "node matrix singular");
  v.require(elapsed < 10.0, "runtime " + std::to_string(elapsed) + " s");
  if (v.pass)
    v.detail = "orth " + cli::detail::sci(orth) + ", basis " + cli::detail::sci(basis) + ", similarity " +
               cli::detail::sci(sim) + ", min sigma " + cli::detail::sci(smin) + ", " + std::to_string(elapsed) + " s";
  return v;
}

Verdict canonical_round_trip(const std::vector<Tridiagonal>& family) {
  Verdict v;
  std::mt19937_64 rng(99);
  double gram = 0.0, gap = 0.0;
  for (const auto& m : family) {
    const std::size_t d = m.dim();
    const auto report = gram_condition_check(m.dense(), unit_vector(d, 0), Conjugation::coordinatewise(d), 1e-8);
    gram = std::max(gram, report.max_relative());
    v.require(report.passes, "Gram condition fails in the defining basis");

    const CMatrix q = oracle::random_unitary(rng, static_cast<Eigen::Index>(d));
    const CMatrix a = q * m.dense() * q.adjoint();
    try {
      const auto form = canonicalize(a, q.col(0), Conjugation(q * q.transpose()), 1e-8);
      const auto sx = spectral_moments<hp_complex>(m, 2 * d + 1);
      const auto sy = spectral_moments<hp_complex>(form.matrix, 2 * d + 1);
      for (std::size_t k = 0; k <= 2 * d + 1; ++k) gap = std::max(gap, rel(sy[k], sx[k]));
    } catch (const Error& e) {
      v.require(false, std::string("canonicalize threw: ") + e.what());
    }
  }
  v.require(gap <= 1e-7, "moment gap " + cli::detail::sci(gap));
  if (v.pass) v.detail = "max Gram " + cli::detail::sci(gram) + ", max moment gap " + cli::detail::sci(gap);
  return v;
}

Verdict negative_controls() {
  Verdict v;
  const Tridiagonal generic({cplx(0.3, 0.8), cplx(-0.5, 0.2), cplx(0.1, -0.9)}, {cplx(1.0, 0.7), cplx(-0.6, 1.1)});
  auto data = build_transform<hp_complex>(generic);
  const double sesq = orthonormality_residual(generic, data.measure, 3, true);
  v.require(sesq > 0.1, "sesquilinear residual only " + cli::detail::sci(sesq));

  CMatrix broken = Tridiagonal({1.0, 2.0, 3.0}, {1.0, 1.0}).dense();
  broken(1, 2) = broken(2, 1) = 0.0;
  const auto check = is_class_matrix(broken);
  v.require(!check.member && check.violation == ClassViolation::zero_offdiagonal,
            "vanishing off-diagonal not diagnosed at k=1");
  v.require(check.message().find("k=1") != std::string::npos, "diagnostic lacks the index");

  std::vector<Atom<hp_complex>> atoms(data.measure.atoms().begin(), data.measure.atoms().end());
  atoms[0].mass *= hp_real("1.01");
  data.measure = AtomicMeasure<hp_complex>(atoms);
  const auto rep = verify_similarity(data);
  v.require(!rep.passes, "perturbed measure still verifies");
  if (v.pass)
    v.detail = "sesquilinear " + cli::detail::sci(sesq) + ", perturbed residual " + cli::detail::sci(rep.max_residual);
  return v;
}

Verdict truncation_invariance() {
  Verdict v;
  std::mt19937_64 rng(4242);
  for (int t = 0; t < 50; ++t) {
    const auto m = random_class_matrix(rng, 2 + t % 5);
    const std::size_t rho = 2 * m.dim() + 1 + t % 4;
    const auto a = spectral_moments<hp_complex>(m, rho, rho + 2);
    const auto b = spectral_moments<hp_complex>(m, rho, rho + 10);
    for (std::size_t k = 0; k <= rho; ++k) v.require(a[k] == b[k], "moment " + std::to_string(k) + " differs");
  }
  if (v.pass) v.detail = "50 matrices, bitwise equal";
  return v;
}

}  // namespace

int main() {
  const auto family = matrix_family();
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"1 golden solve", golden_solve},
      {"2 explicit measure", explicit_measure},
      {"3 gap gadget exactness", gadget_exactness},
      {"4 similarity properties", [&] { return similarity_suite(family); }},
      {"5 canonical round trip", [&] { return canonical_round_trip(family); }},
      {"6 negative controls", negative_controls},
      {"7 truncation invariance", truncation_invariance},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Verdict v;
    try {
      v = fn();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("uncaught: ") + e.what();
    }
    if (!v.pass) ++failures;
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
