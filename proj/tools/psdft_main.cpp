#include "psdft/scenario.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
  CLI::App app{"pseudospectral DFT/DDFT scenario runner"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run a scenario from a JSON configuration");
  std::string config_path;
  psdft::RunFlags flags;
  run->add_option("config", config_path, "scenario configuration file")->required();
  run->add_option("--output-dir", flags.output_dir, "override the output directory");
  run->add_option("--jobs", flags.jobs, "parallel sweep points in convergence studies");
  run->add_flag("--verify", flags.verify, "deterministic sequential reductions");
  run->add_flag("--dump-operators", flags.dump_operators,
                "dump convolution operator matrices");

  CLI11_PARSE(app, argc, argv);
  if (flags.verify) flags.jobs = 1;
  return psdft::run_scenario_file(config_path, flags);
}
