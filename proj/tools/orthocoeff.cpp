#include <fstream>
#include <iostream>
#include <utility>

#include <CLI11.hpp>

#include "orthocoeff/cli.hpp"

namespace oc = orthocoeff;

int main(int argc, char** argv) {
  CLI::App app{"Fourier coefficients of orthogonal Eisenstein series"};
  app.require_subcommand(1);
  oc::cli::RunConfig cfg;
  std::string lambda, max_q0, format;
  bool max_q0_given = false;

  const std::pair<const char*, const char*> modes[] = {
      {"coeff", "one coefficient a(lambda)"},
      {"table", "all coefficients with Q_0 <= --max-q0"},
      {"selfcheck", "internal consistency checks for this lattice and weight"},
      {"maass", "Maass relations on the cone grid"},
      {"cusps", "zero-dimensional cusps and E* relation weights"},
  };
  for (auto [name, help] : modes) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--gram", cfg.gram_path, "Gram matrix file")->required();
    sub->add_option("-k", cfg.k, "weight")->required();
    sub->add_option("--lambda", lambda, "l,w1..wn,m");
    sub->add_option("--max-q0", max_q0, "bound on Q_0 (rational)");
    sub->add_option("--gamma-max", cfg.gamma_max, "series truncation");
    sub->add_option("--budget", cfg.budget, "enumeration budget");
    sub->add_option("--format", format, "json|csv|text");
    sub->add_option("--out", cfg.out_path, "output file");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : oc::cli::kExitValidation;
  }

  try {
    cfg.mode = oc::cli::parse_mode(app.get_subcommands().front()->get_name());
    if (!lambda.empty()) cfg.lambda = oc::cli::parse_int_list(lambda);
    if (!max_q0.empty()) {
      cfg.max_q0 = oc::cli::parse_rational(max_q0);
      max_q0_given = true;
    }
    if (!format.empty()) cfg.format = oc::cli::parse_format(format);
  } catch (const oc::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return oc::cli::kExitValidation;
  }
  if (cfg.mode == oc::cli::Mode::maass && !max_q0_given) cfg.max_q0 = 4;

  if (cfg.out_path.empty()) return oc::cli::run(cfg, std::cout, std::cerr);
  std::ofstream out(cfg.out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot open " << cfg.out_path << '\n';
    return oc::cli::kExitValidation;
  }
  return oc::cli::run(cfg, out, std::cerr);
}
