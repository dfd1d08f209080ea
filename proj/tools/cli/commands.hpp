#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include <json.hpp>

#include "bfamily/simulation.hpp"
#include "cli/checks.hpp"
#include "cli/config.hpp"

namespace bfam::cli {

enum ExitCode : int { kSuccess = 0, kCheckFailure = 1, kUsageError = 2, kIoError = 3 };

struct RunOutcome {
  SimulationResult sim;
  RunData data;
  std::vector<Verdict> verdicts;
  std::optional<Theorem41> t41;
};

/// Builds the initial state, runs and evaluates the enabled checks. No I/O
/// besides reading a custom table.
RunOutcome execute_run(const RunConfig& cfg);

/// Writes diagnostics.csv, origin.csv, identities.csv, snap_<i>.csv and
/// manifest.json into dir (created if missing).
void write_run_outputs(const RunConfig& cfg, const RunOutcome& outcome, const std::filesystem::path& dir);

nlohmann::json build_manifest(const RunConfig& cfg, const RunOutcome& outcome);

int cmd_run(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out_dir,
            std::ostream& log, std::ostream& err);
int cmd_sweep(const std::filesystem::path& config, const std::optional<std::filesystem::path>& out_dir,
              std::ostream& log, std::ostream& err);
int cmd_check(const std::filesystem::path& manifest, std::ostream& log, std::ostream& err);

/// Worker count for sweeps: TBF_SWEEP_WORKERS if set and positive, else the
/// hardware concurrency.
unsigned sweep_workers();

}  // namespace bfam::cli
