#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "hypolab/errors.hpp"

namespace cli = hypolab::cli;

int main(int argc, char** argv) {
  CLI::App app{"hypolab: kinetic Fokker-Planck decay experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  int threads = 0;
  bool gnuplot = false;

  for (const char* name : {"simulate", "gcc", "verify", "bogovskii", "certificate"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration")->required();
    sub->add_option("--out", out_dir, "output directory (overrides output.dir)");
    sub->add_option("--seed", seed, "seed (overrides run.seed)");
    sub->add_option("--threads", threads, "worker threads (overrides run.threads)")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--gnuplot", gnuplot, "emit a gnuplot script next to the CSV");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kConfigError;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  CLI::App* sub = app.get_subcommand(command);
  cli::RunConfig config;
  try {
    config = cli::load_config(config_path);
  } catch (const hypolab::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return cli::kConfigError;
  } catch (const hypolab::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return cli::kIoError;
  }
  if (sub->count("--seed")) config.seed = seed;
  if (sub->count("--threads")) config.threads = threads;
  if (sub->count("--out")) config.output_dir = out_dir;

  return cli::run_command(command, config, config.output_dir, gnuplot, std::cout, std::cerr);
}
