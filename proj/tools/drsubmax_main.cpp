#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "drsubmax/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DR-submodular maximization over polytopes"};
  app.require_subcommand(1);

  std::string config_path, out_path, seeds;
  int jobs = 0;

  for (const char* name : {"offline", "online", "sweep", "baseline"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (TOML or JSON)")
        ->required();
    sub->add_option("--out", out_path, "output CSV path ('-' for stdout)");
    sub->add_option("--seeds", seeds, "comma-separated seed list override");
    sub->add_option("--jobs", jobs, "worker threads (env DRSUBMAX_JOBS as fallback)");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();
  return drsubmax::run_command(sub, config_path, out_path, seeds, jobs, std::cerr);
}
