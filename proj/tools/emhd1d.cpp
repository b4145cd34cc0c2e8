// Command-line front end: emhd1d <run|blowup|symmetry|lp|selftest> --config PATH ...
#include <CLI11.hpp>

#include <iostream>
#include <utility>

#include "emhd1d/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"1D electron-MHD model solver and blowup harness"};
  app.require_subcommand(1);
  emhd1d::CommandOptions opts;
  std::string config, sweep, out;
  std::uint64_t seed = 0;
  double lambda = 0.0;

  const std::pair<const char*, const char*> commands[] = {
      {"run", "evolve a datum and write norm series and snapshots"},
      {"blowup", "transport blowup harness at N and N/2"},
      {"symmetry", "scaling-symmetry mismatch of the full model"},
      {"lp", "Bernstein, commutator and norm-equivalence reports"},
      {"selftest", "operator identities on random fields"}};
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "config file or manifest.json");
    sub->add_option("--sweep", sweep, "one job per line of key=value overrides");
    sub->add_option("--out", out, "output directory");
    sub->add_option("--seed", seed, "datum seed");
    if (std::string(name) == "symmetry") sub->add_option("--lambda", lambda, "scaling factor");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : emhd1d::kConfigError;
  }

  const auto* sub = app.get_subcommands().front();
  opts.command = sub->get_name();
  if (sub->count("--config")) opts.config = config;
  if (sub->count("--sweep")) opts.sweep = sweep;
  if (sub->count("--out")) opts.out = out;
  if (sub->count("--seed")) opts.seed = seed;
  if (opts.command == "symmetry" && sub->count("--lambda")) opts.lambda = lambda;
  return emhd1d::run_command(opts, std::cout);
}
