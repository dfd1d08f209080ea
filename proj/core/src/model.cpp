#include "bfamily/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bfam {

ModelParams ModelParams::custom(double k1, double k2, double k3) {
  if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3)) {
    throw std::invalid_argument("model coefficients must be finite");
  }
  return ModelParams{k1, k2, k3, std::nullopt, CaseTag::Custom};
}

ModelParams make_params(CaseTag case_tag, double b) {
  if (!std::isfinite(b)) {
    throw std::invalid_argument("b must be finite");
  }
  switch (case_tag) {
    case CaseTag::CaseI:
      return ModelParams{b, 2.0 * b, 1.0, b, CaseTag::CaseI};
    case CaseTag::CaseII:
      return ModelParams{b + 1.0, 2.0, b, b, CaseTag::CaseII};
    case CaseTag::Custom:
      break;
  }
  throw std::invalid_argument("make_params needs CaseI or CaseII; use ModelParams::custom");
}

ScenarioBranch classify_scenario(const ModelParams& p, Framework framework) {
  const double k1 = p.k1, k2 = p.k2, k3 = p.k3;
  if (framework == Framework::Hs) {
    if (k1 <= -0.5 && k3 <= std::min(0.0, k2)) return {Branch::NegInfUx, true, false};
    if (k1 >= 1.0 && k3 >= std::max(0.0, k2)) return {Branch::PosInfUx, true, false};
    return {Branch::TwoSidedUx, true, false};
  }
  const bool neg = k1 <= 0.5 && k3 <= std::min(k2, 0.0);
  const bool pos = k1 >= 0.5 && k3 >= std::max(k2, 0.0);
  if (pos) return {Branch::PosInfUx, false, neg};
  if (neg) return {Branch::NegInfUx, false, false};
  return {Branch::TwoSidedUx, false, false};
}

std::string_view to_string(CaseTag tag) {
  switch (tag) {
    case CaseTag::CaseI: return "CaseI";
    case CaseTag::CaseII: return "CaseII";
    case CaseTag::Custom: return "Custom";
  }
  return "?";
}

std::string_view to_string(Framework framework) {
  return framework == Framework::Hs ? "Hs" : "H2";
}

std::string_view to_string(Branch branch) {
  switch (branch) {
    case Branch::NegInfUx: return "NegInfUx";
    case Branch::PosInfUx: return "PosInfUx";
    case Branch::TwoSidedUx: return "TwoSidedUx";
  }
  return "?";
}

std::optional<CaseTag> parse_case_tag(std::string_view text) {
  if (text == "CaseI") return CaseTag::CaseI;
  if (text == "CaseII") return CaseTag::CaseII;
  if (text == "Custom") return CaseTag::Custom;
  return std::nullopt;
}

std::optional<Framework> parse_framework(std::string_view text) {
  if (text == "Hs") return Framework::Hs;
  if (text == "H2") return Framework::H2;
  return std::nullopt;
}

}  // namespace bfam
