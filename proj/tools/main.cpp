#include <CLI11.hpp>

#include <iostream>

#include "quadsim/cli.hpp"

namespace {

void add_common(CLI::App* cmd, quadsim::cli::Options& opts) {
  cmd->add_option("--config", opts.config, "INI config file (built-in defaults when omitted)");
  cmd->add_option("--override", opts.overrides, "section.key=value, repeatable; beats the file");
  cmd->add_option("--rounds", opts.rounds, "maximum rounds");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quadsim: round-based Q-LEACH / LEACH wireless sensor network simulator"};
  app.require_subcommand(1);

  quadsim::cli::Options opts;

  auto* run = app.add_subcommand("run", "run one simulation and write its trace");
  add_common(run, opts);
  run->add_option("--protocol", opts.protocols, "qleach or leach")->expected(1);
  run->add_option("--seed", opts.seed, "master seed");
  run->add_option("--out", opts.out, "output directory (default $QUADSIM_OUT or ./quadsim-out)");

  auto* compare = app.add_subcommand("compare", "paired multi-seed protocol comparison");
  add_common(compare, opts);
  compare->add_option("--protocol", opts.protocols, "protocol to include, repeatable")
      ->delimiter(',');
  auto* seeds = compare->add_option("--seeds", opts.seed_count, "run seeds 0..N-1 (default 20)");
  compare->add_option("--seed", opts.seed, "run a single seed")->excludes(seeds);
  compare->add_option("--out", opts.out, "output directory (default $QUADSIM_OUT or ./quadsim-out)");

  auto* validate = app.add_subcommand("validate", "check a config and print resolved values");
  add_common(validate, opts);
  validate->add_option("--protocol", opts.protocols, "protocol to check")->expected(1);
  validate->add_option("--seed", opts.seed, "master seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : quadsim::cli::kUsage;
  }

  if (run->parsed()) return quadsim::cli::cmd_run(opts, std::cout, std::cerr);
  if (compare->parsed()) return quadsim::cli::cmd_compare(opts, std::cout, std::cerr);
  return quadsim::cli::cmd_validate(opts, std::cout, std::cerr);
}
