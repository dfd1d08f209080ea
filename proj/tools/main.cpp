#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral simulator for the two-component b-family system"};
  app.require_subcommand(1);

  std::string run_config, sweep_config, manifest, run_out, sweep_out;
  auto* run = app.add_subcommand("run", "Run one simulation from a config (or a manifest's embedded config)");
  run->add_option("config", run_config, "Run config or manifest.json")->required();
  run->add_option("--out", run_out, "Output directory (overrides outputs.directory)");

  auto* sweep = app.add_subcommand("sweep", "Cartesian sweep over case, b and amplitude");
  sweep->add_option("config", sweep_config, "Sweep config")->required();
  sweep->add_option("--out", sweep_out, "Output directory (overrides the config's output)");

  auto* check = app.add_subcommand("check", "Re-verify a finished run offline from its manifest");
  check->add_option("manifest", manifest, "manifest.json of a run")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : bfam::cli::kUsageError;
  }

  auto opt = [](const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::filesystem::path>(s); };
  if (*run) return bfam::cli::cmd_run(run_config, opt(run_out), std::cout, std::cerr);
  if (*sweep) return bfam::cli::cmd_sweep(sweep_config, opt(sweep_out), std::cout, std::cerr);
  return bfam::cli::cmd_check(manifest, std::cout, std::cerr);
}
