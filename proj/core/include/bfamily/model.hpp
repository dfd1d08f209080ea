#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace bfam {

/// Which coefficient family a parameter set came from.
enum class CaseTag { CaseI, CaseII, Custom };

/// Coefficients (k1, k2, k3) of the two-component b-family system
///
///   m_t = u m_x + k1 u_x m + k2 rho rho_x,   rho_t = k3 (u rho)_x,   m = u - u_xx.
///
/// CaseI is k1 = b, k2 = 2b, k3 = 1 and CaseII is k1 = b + 1, k2 = 2, k3 = b.
/// Custom sets carry no b.
struct ModelParams {
  double k1 = 0.0;
  double k2 = 0.0;
  double k3 = 0.0;
  std::optional<double> b;
  CaseTag case_tag = CaseTag::Custom;

  /// Raw coefficients; throws std::invalid_argument on non-finite input.
  static ModelParams custom(double k1, double k2, double k3);

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Builds CaseI or CaseII coefficients from b. Throws std::invalid_argument
/// for non-finite b or case_tag == Custom.
ModelParams make_params(CaseTag case_tag, double b);

/// Regularity framework of the blow-up scenario: the H^s (s > 5/2) result,
/// where rho_x also matters, or the H^2 x H^1 result, where only u_x does.
enum class Framework { Hs, H2 };

enum class Branch { NegInfUx, PosInfUx, TwoSidedUx };

struct ScenarioBranch {
  Branch branch = Branch::TwoSidedUx;
  bool rho_x_relevant = false;
  // Set when both one-sided H2 predicates hold (k1 == 1/2 boundary).
  bool boundary_ambiguous = false;

  friend bool operator==(const ScenarioBranch&, const ScenarioBranch&) = default;
};

/// Pure function of (k1, k2, k3); the case tag is ignored.
ScenarioBranch classify_scenario(const ModelParams& p, Framework framework);

std::string_view to_string(CaseTag tag);
std::string_view to_string(Framework framework);
std::string_view to_string(Branch branch);

std::optional<CaseTag> parse_case_tag(std::string_view text);
std::optional<Framework> parse_framework(std::string_view text);

}  // namespace bfam
