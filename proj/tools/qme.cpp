// qme: benchmark driver for the maximal nonpositive solvent of
// X^2 + B X + C = 0.
//
//   qme run --example 1 --n 30 --methods sda,bl,bll
//   qme run --problem problem.json --format json --out results/run1

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "qme/qme.hpp"

namespace {

constexpr int kExitInputError = 1;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Maximal nonpositive solvent of X^2 + BX + C = 0: doubling vs. fixed-point"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Solve one problem with the selected methods");
  int example = 0;
  std::size_t n = 0;
  std::string problem_file;
  std::vector<std::string> methods{"sda"};
  double tol = 1e-12;
  int kmax = 1000;
  std::string out = "qme";
  std::string format = "table";

  auto* ex_opt = run->add_option("--example", example, "Built-in example family (1 or 2)")
                     ->check(CLI::IsMember({1, 2}));
  auto* n_opt = run->add_option("--n", n, "Dimension of the built-in example")
                    ->check(CLI::Range(std::size_t{2}, std::size_t{100000}));
  auto* file_opt = run->add_option("--problem", problem_file, "Problem JSON file");
  ex_opt->needs(n_opt);
  n_opt->needs(ex_opt);
  ex_opt->excludes(file_opt);
  run->add_option("--methods", methods, "Comma-separated list of sda, bl, bll")->delimiter(',');
  run->add_option("--tol", tol, "Stop when NRes < tol")->check(CLI::PositiveNumber);
  run->add_option("--kmax", kmax, "Iteration budget")->check(CLI::PositiveNumber);
  run->add_option("--out", out, "Output path prefix");
  run->add_option("--format", format, "Summary format")
      ->check(CLI::IsMember({"table", "json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    qme::bench::RunConfig cfg;
    if (!problem_file.empty()) {
      cfg.problem = std::filesystem::path(problem_file);
    } else if (example != 0) {
      cfg.problem = qme::bench::ExampleProblem{example, n};
    } else {
      std::cerr << "error: one of --example/--n or --problem is required\n";
      return kExitInputError;
    }
    cfg.methods.clear();
    for (const auto& m : methods) cfg.methods.push_back(qme::bench::parse_method(m));
    cfg.tol = tol;
    cfg.kmax = kmax;
    cfg.output = out;
    cfg.format = qme::bench::parse_format(format);

    const auto result = qme::bench::run(cfg);
    std::cout << result.summary;
    return result.exit_code();
  } catch (const qme::ParseError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const qme::ValidationError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const qme::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
}
