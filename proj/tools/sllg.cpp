// Command-line front end: sllg <run|ensemble|check|dispersion|converge> [flags]
#include <cstdlib>
#include <iostream>

#include "CLI11.hpp"
#include "sllg/commands.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string study = "galerkin";
  std::string fault;
  int trials = 50;
};

// Precedence: config file < SLLG_OUT_DIR < command-line flags.
sllg::RunConfig load(const Flags& f) {
  auto cfg = f.config.empty() ? sllg::RunConfig{} : sllg::parse_config(f.config);
  if (const char* env = std::getenv("SLLG_OUT_DIR"); env && *env) cfg.out = env;
  if (!f.out.empty()) cfg.out = f.out;
  if (f.seed) cfg.seed = *f.seed;
  if (f.threads) cfg.threads = *f.threads;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stochastic LLG simulator with bi-harmonic exchange on the flat torus"};
  app.require_subcommand(1);
  Flags f;

  auto add_common = [&f](CLI::App* cmd, bool needs_config) {
    auto* opt = cmd->add_option("--config", f.config, "INI configuration file")->check(CLI::ExistingFile);
    if (needs_config) opt->required();
    cmd->add_option("--out", f.out, "output directory (overrides run.out and SLLG_OUT_DIR)");
    cmd->add_option("--seed", f.seed, "base seed (overrides run.seed)");
    cmd->add_option("--threads", f.threads, "worker threads (overrides run.threads)")->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "integrate one trajectory");
  add_common(run, true);
  auto* ensemble = app.add_subcommand("ensemble", "integrate run.trajectories paths and report moments");
  add_common(ensemble, true);
  auto* check = app.add_subcommand("check", "run the operator identity suite");
  check->add_option("--out", f.out, "directory for check.json");
  check->add_option("--trials", f.trials, "random triples per identity")->check(CLI::PositiveNumber);
  check->add_option("--inject-fault", f.fault, "debug hook: flip the sign of one identity");
  auto* dispersion = app.add_subcommand("dispersion", "tabulate linear rates around e3");
  add_common(dispersion, false);
  auto* converge = app.add_subcommand("converge", "self-convergence studies");
  add_common(converge, true);
  converge->add_option("--study", f.study, "galerkin, dt or coupling")
      ->check(CLI::IsMember({"galerkin", "dt", "coupling"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      sllg::IdentitySuiteConfig suite;
      suite.trials = f.trials;
      if (!f.fault.empty()) suite.fault = f.fault;
      std::filesystem::path out = f.out;
      if (const char* env = std::getenv("SLLG_OUT_DIR"); out.empty() && env && *env) out = env;
      return sllg::cmd_check(suite, out, std::cout);
    }
    const auto cfg = load(f);
    if (run->parsed()) return sllg::cmd_run(cfg, std::cout);
    if (ensemble->parsed()) return sllg::cmd_ensemble(cfg, std::cout);
    if (dispersion->parsed()) return sllg::cmd_dispersion(cfg, std::cout);
    return sllg::cmd_converge(cfg, sllg::parse_study(f.study), std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sllg::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return sllg::kExitFailed;
  }
}
