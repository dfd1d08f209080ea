#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "bfamily/diagnostics.hpp"
#include "bfamily/initdata.hpp"
#include "bfamily/model.hpp"
#include "bfamily/stepper.hpp"

namespace bfam::cli {

/// Bad configuration; the message names the offending field (or line for
/// syntax errors).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Tolerances {
  double transport = 1e-6;
  /// max interior R / max |rhs| per identity
  double identity_rel = 1e-3;
  double symmetry = 1e-10;
  std::size_t symmetry_grace_steps = 10;
  double origin = 1e-9;
  double conservation = 1e-12;
  double gronwall_slack = 1e-8;
  double rho_sup_slack = 1e-8;
};

struct CheckToggles {
  bool transport = true;
  bool identities = true;
  bool gronwall = true;
  bool rho_sup = true;
  bool conservation = true;
  bool symmetry = false;
  bool riccati = false;
  bool h3_energy_flagged = false;
  SymmetryMode symmetry_mode = SymmetryMode::UOddRhoEven;
  Tolerances tol;
};

struct OutputOptions {
  std::string directory = "out";
  std::size_t diag_every = 1;
  std::size_t snapshot_every = 0;
  std::size_t char_label_stride = 4;
  double hs_order = 2.0;
};

struct RunConfig {
  ModelParams model = make_params(CaseTag::CaseI, 2.0);
  double L = 20.0;
  std::size_t N = 1024;
  StepControl control;
  InitSpec u0;
  InitSpec rho0;
  OutputOptions outputs;
  CheckToggles checks;
};

/// Parses a run configuration. Missing fields take defaults, unknown fields
/// are rejected. Relative table paths are resolved against base_dir.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// Full configuration with every default spelled out.
nlohmann::json to_json(const RunConfig& c);

/// Reads JSON from a file; syntax errors report the line and column.
nlohmann::json read_json_file(const std::filesystem::path& path);

/// Accepts either a run config or a manifest (uses its embedded config).
RunConfig load_run_config(const std::filesystem::path& path);

nlohmann::json to_json(const InitSpec& s);

}  // namespace bfam::cli
