#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "csim/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tridiagonal complex symmetric operators as rank-one perturbations of normal operators"};
  app.require_subcommand(1);

  csim::cli::JobConfig cfg;
  std::size_t rho = 0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input,-i", cfg.input, "Input JSON file");
    sub->add_option("--output,-o", cfg.output, "Output JSON file (stdout when omitted)");
    sub->add_option("--tol", cfg.tol, "Relative tolerance")->capture_default_str();
  };
  auto add_schedule = [&](CLI::App* sub) {
    sub->add_option("--rho", rho, "Highest moment order (default 2d+1)");
    sub->add_option("--gamma", cfg.gamma, "Radius growth factor between circles")->capture_default_str();
    sub->add_option("--delta", cfg.delta, "Positivity margin of circle masses")->capture_default_str();
  };

  add_common(app.add_subcommand("classify", "Class membership, J-symmetry and Gram determinant checks"));
  add_common(app.add_subcommand("canonicalize", "Tridiagonal basis from (A, x0, J)"));
  auto* moments = app.add_subcommand("moments", "Spectral moments of a class matrix");
  add_common(moments);
  add_schedule(moments);
  auto* solve = app.add_subcommand("solve", "Atomic solution of a truncated moment problem");
  add_common(solve);
  add_schedule(solve);
  auto* similarity = app.add_subcommand("similarity", "Build and verify the rank-one similarity");
  add_common(similarity);
  add_schedule(similarity);
  add_common(app.add_subcommand("verify", "Re-verify a stored measure or similarity artifact"));
  auto* gen = app.add_subcommand("gen", "Random class matrix");
  gen->add_option("--output,-o", cfg.output, "Output JSON file (stdout when omitted)");
  gen->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  gen->add_option("--d", cfg.d, "Dimension")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : csim::cli::kMalformedInput;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  if (rho != 0) cfg.rho = rho;
  return csim::cli::run(cfg, std::cout, std::cerr);
}
