#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bfamily/trajectory.hpp"
#include "cli/config.hpp"

namespace bfam::cli {

struct Verdict {
  std::string name;
  bool applicable = true;
  bool passed = true;
  std::string detail;
};

struct CharSummary {
  bool enabled = false;
  bool smooth = true;
  bool near_boundary = false;
  std::size_t wrapped = 0;
};

/// The Theorem 4.1 pair for runs whose coefficients and data satisfy its
/// hypotheses: 1 < k1 <= 3, k2 >= 0, u0 odd, rho0 even (or odd, Remark 4.1)
/// with rho0(0) = 0, and u0'(0) > 0. `symmetric_data` carries the parity part.
struct Theorem41 {
  double u0_prime = 0.0;
  double bound = 0.0;
  std::optional<double> t_detected;  ///< only for BlowUpDetected
  bool respected = true;
};

std::optional<Theorem41> theorem41(const ModelParams& p, bool symmetric_data,
                                   const std::vector<OriginSample>& origin, const RunReport& report);

/// Parity part of the Theorem 4.1 hypotheses, to roundoff.
bool theorem41_symmetric(const State& s0);

/// Everything needed to evaluate the checks. All of it is written to disk,
/// so `check` can rebuild this from a run directory.
struct RunData {
  std::vector<DiagRecord> records;
  std::vector<OriginSample> origin;
  std::vector<IdentitySample> identities;
  RunReport report;
  CharSummary chars;
  bool symmetric_data = false;
};

std::vector<Verdict> evaluate_checks(const RunConfig& cfg, const RunData& data);

bool all_passed(const std::vector<Verdict>& verdicts);

nlohmann::json to_json(const Verdict& v);
nlohmann::json to_json(const Theorem41& t);

}  // namespace bfam::cli
