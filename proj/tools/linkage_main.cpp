#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "linkage/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Equilibrium laboratory for effort games under data linkages"};
  app.require_subcommand(1);

  linkage::RunSpec spec;
  std::string var_name = "N";
  std::string values_text;
  std::string format_name = "csv";

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--scenario", spec.scenario_path, "scenario JSON path")
        ->required();
    cmd->add_option("--seed", spec.seed, "random seed");
    cmd->add_option("--out", spec.out_path, "output path (default stdout)");
    cmd->add_option("--format", format_name, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  CLI::App* solve =
      app.add_subcommand("solve", "solve one equilibrium and report welfare");
  add_common(solve);

  CLI::App* sweep =
      app.add_subcommand("sweep", "solve across a grid of one variable");
  add_common(sweep);
  sweep->add_option("--var", var_name, "N, R, gamma_scale, or observed_m");
  sweep->add_option("--values", values_text, "lo:hi, lo:hi:step, or list")
      ->required();

  CLI::App* verify =
      app.add_subcommand("verify", "run the full verification suite");
  add_common(verify);

  CLI::App* oracle = app.add_subcommand(
      "oracle", "Monte Carlo marginal-value estimate with standard error");
  add_common(oracle);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) spec.command = linkage::Command::Solve;
    if (sweep->parsed()) {
      spec.command = linkage::Command::Sweep;
      linkage::SweepSpec sw;
      sw.variable = linkage::sweep_variable_from_name(var_name);
      sw.values = linkage::parse_sweep_values(values_text);
      spec.sweep = sw;
    }
    if (verify->parsed()) spec.command = linkage::Command::Verify;
    if (oracle->parsed()) spec.command = linkage::Command::Oracle;
    spec.format = format_name == "json" ? linkage::OutputFormat::Json
                                        : linkage::OutputFormat::Csv;
  } catch (const std::exception& e) {
    std::fprintf(stderr,
                 "{\"error\":{\"type\":\"structural\",\"message\":\"%s\"}}\n",
                 e.what());
    return 2;
  }

  return linkage::run(spec);
}
