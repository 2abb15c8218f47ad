#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "coexist/cli.hpp"

int main(int argc, char** argv) {
  namespace cli = coexist::cli;

  CLI::App app{"Stackelberg pricing of a supplier/in-house coalition against an out-house rival"};
  app.require_subcommand(1);

  cli::Options opt;
  std::string path;
  std::string grid;
  int refine = -1;
  double tol = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("scenario", path, "scenario JSON file")->required();
    sub->add_option("--grid", grid, "oracle grid, <p_steps>x<q_steps>");
    sub->add_option("--refine", refine, "oracle refinement rounds")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", tol, "oracle relative tolerance")->check(CLI::PositiveNumber);
  };

  auto* solve = app.add_subcommand("solve", "solve one scenario");
  add_common(solve);
  solve->add_flag("--json", opt.json, "JSON report on stdout, table on stderr");
  solve->add_flag("--verify", opt.verify, "also run the grid oracle");

  auto* sweep = app.add_subcommand("sweep", "eps sweep as CSV");
  add_common(sweep);
  sweep->add_flag("--verify", opt.verify, "fill the oracle_agrees column");
  sweep->add_flag("--verbose", opt.verbose, "append a reason column");

  auto* verify = app.add_subcommand("verify", "compare the solution with the grid oracle");
  add_common(verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::kParseError;
  }

  if (!grid.empty()) {
    try {
      const auto [p, q] = cli::parse_grid(grid);
      opt.p_steps = p;
      opt.q_steps = q;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return cli::kParseError;
    }
  }
  if (refine >= 0) opt.refine = refine;
  if (tol > 0.0) opt.tol = tol;

  if (*solve) return cli::cmd_solve(path, opt, std::cout, std::cerr);
  if (*sweep) return cli::cmd_sweep(path, opt, std::cout, std::cerr);
  return cli::cmd_verify(path, opt, std::cout, std::cerr);
}
