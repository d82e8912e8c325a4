// Command-line front end: scenario runner and the leaf-solver demonstration.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fncalc/error.hpp"
#include "fncalc/runner.hpp"

using namespace fncalc;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct RunArgs {
  std::string file;
  std::string format = "text";
  std::optional<std::uint64_t> seed;
  std::optional<int> cap;
  bool serial = false;
  std::vector<std::string> only;
};

void add_run_options(CLI::App* cmd, RunArgs& args) {
  cmd->add_option("file", args.file, "scenario file")->required();
  cmd->add_option("--format", args.format, "report format")->check(CLI::IsMember({"text", "machine"}));
  cmd->add_option("--seed", args.seed, "sampling seed (overrides FNCALC_SEED and the scenario)");
  cmd->add_option("--cap", args.cap, "type-search cap")->check(CLI::Range(1, 1000));
  cmd->add_flag("--serial", args.serial, "run checks one after another");
}

int run_file(const RunArgs& args, const std::vector<std::string>& kinds) {
  std::ifstream in(args.file);
  if (!in) {
    std::cerr << "error: cannot read " << args.file << "\n";
    return kExitInput;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Scenario scenario = [&] {
    try {
      return parse_scenario(buf.str());
    } catch (const ParseError& e) {
      std::cerr << args.file << ":" << e.line() << ":" << e.column() << ": error: " << e.reason() << "\n";
      std::exit(kExitInput);
    }
  }();
  RunOptions options;
  try {
    options.seed = resolve_seed(scenario, args.seed, std::getenv("FNCALC_SEED"));
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  options.cap = args.cap.value_or(scenario.cap.value_or(kDefaultCap));
  options.mode = args.serial ? Execution::Serial : Execution::Parallel;
  options.only = args.only.empty() ? kinds : args.only;
  const Report report = run_scenario(scenario, options);
  if (args.format == "machine")
    std::cout << report.to_json().dump(2) << "\n";
  else
    std::cout << report.to_text();
  return report.all_passed() ? 0 : kExitFail;
}

int demo_maxprinciple(int n, double tolerance, bool serial, std::uint64_t seed) {
  const auto start = std::chrono::steady_clock::now();
  const MaxPrincipleReport r = max_principle_demo(n, tolerance, serial ? Execution::Serial : Execution::Parallel, seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("leaf grid %dx%d, tolerance %.1e\n", r.n, r.n, r.tolerance);
  for (const auto& c : r.cases)
    std::printf("%-16s iterations %7d  residual %.3e  oscillation %.3e  %s\n", c.label.c_str(), c.solve.iterations,
                c.solve.residual, c.solve.oscillation, c.constant ? "constant" : "NOT constant");
  std::printf("%s in %.2f s\n", r.passed() ? "pass" : "fail", seconds);
  return r.passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fncalc: graded derivations, integrability and Levi-flat checks"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "run every check of a scenario file");
  add_run_options(run, run_args);
  run->add_option("--only", run_args.only, "restrict to these check kinds")->check(CLI::IsMember(check_kinds()));

  RunArgs check_args, mc_args, levi_args;
  auto* check = app.add_subcommand("check", "run the distribution, type, Frobenius and delta checks");
  add_run_options(check, check_args);
  auto* mc = app.add_subcommand("mc", "run the Maurer-Cartan, bracket and gamma-series checks");
  add_run_options(mc, mc_args);
  auto* levi = app.add_subcommand("levi", "run the Levi-flatness and deformation checks");
  add_run_options(levi, levi_args);

  auto* demo = app.add_subcommand("demo", "numerical demonstrations");
  demo->require_subcommand(1);
  auto* maxp = demo->add_subcommand("maxprinciple", "leafwise maximum principle on a periodic grid");
  int n = 64;
  double tolerance = 1e-6;
  bool serial = false;
  std::uint64_t seed = 7;
  maxp->add_option("--n", n, "grid size")->check(CLI::Range(3, 4096));
  maxp->add_option("--tolerance", tolerance, "oscillation tolerance");
  maxp->add_option("--seed", seed, "noise seed");
  maxp->add_flag("--serial", serial, "single-threaded sweeps");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  if (*run) return run_file(run_args, {});
  if (*check) return run_file(check_args, {"integrable", "type", "frobenius", "delta_alfa"});
  if (*mc) return run_file(mc_args, {"mc_residual", "type", "fn_bracket", "gamma_series"});
  if (*levi) return run_file(levi_args, {"levi_flat", "deformation_residual"});
  if (*maxp) return demo_maxprinciple(n, tolerance, serial, seed);
  return kExitInput;
}
