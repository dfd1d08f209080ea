#include "cli/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "bfamily/characteristics.hpp"
#include "bfamily/diagnostics.hpp"
#include "bfamily/initdata.hpp"

namespace bfam::cli {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

Verdict from(std::string name, const CheckResult& r) { return {std::move(name), r.applicable, r.passed, r.detail}; }

bool stopped_early(const RunReport& r) { return r.status != RunStatus::ReachedTEnd; }

// Largest record index still trusted by the symmetry and origin checks.
std::size_t last_trusted_index(const RunData& d, std::size_t grace_steps) {
  if (d.records.empty()) return 0;
  std::size_t last = d.records.size() - 1;
  if (!stopped_early(d.report)) return last;
  const std::size_t final_step = d.report.steps;
  while (last > 0 && d.records[last].step + grace_steps > final_step) --last;
  return last;
}

}  // namespace

bool theorem41_symmetric(const State& s0) {
  const double scale = 1e-14 * std::max({1.0, s0.u.sup_norm(), s0.rho.sup_norm()});
  const bool u_odd_rho_even = symmetry_residual(s0, SymmetryMode::UOddRhoEven) <= scale;
  const bool u_odd_rho_odd = symmetry_residual(s0, SymmetryMode::UOddRhoOdd) <= scale;
  return (u_odd_rho_even || u_odd_rho_odd) && std::abs(s0.rho[s0.grid().origin_index()]) <= scale;
}

std::optional<Theorem41> theorem41(const ModelParams& p, bool symmetric_data, const std::vector<OriginSample>& origin,
                                   const RunReport& report) {
  if (!symmetric_data || origin.empty() || !blowup_bound_applies(p)) return std::nullopt;
  const double h0 = origin.front().ux;
  if (!(h0 > 1e-8)) return std::nullopt;
  Theorem41 t;
  t.u0_prime = h0;
  t.bound = blowup_bound(p, h0);
  if (report.status == RunStatus::BlowUpDetected) {
    t.t_detected = report.t_final;
    t.respected = report.t_final <= t.bound;
  } else {
    // Reaching t_end past the bound would contradict the theorem.
    t.respected = report.t_final < t.bound;
  }
  return t;
}

std::vector<Verdict> evaluate_checks(const RunConfig& cfg, const RunData& d) {
  std::vector<Verdict> out;
  const auto& tol = cfg.checks.tol;
  const ModelParams& p = cfg.model;

  out.push_back({"status", true, d.report.status != RunStatus::Overflow,
                 std::string("run ended with ") + std::string(to_string(d.report.status))});

  if (cfg.checks.conservation) out.push_back(from("conservation", conservation_check(d.records, tol.conservation)));

  if (cfg.checks.rho_sup) {
    const RhoSupVerdict v = rho_sup_bound_check(d.records, p, tol.rho_sup_slack);
    std::string detail = v.all_hold() ? "all applicable sup bounds hold" : "sup bound violated";
    if (v.first_violation_t) detail += fmt(" at t=%.17g", *v.first_violation_t);
    out.push_back({"rho_sup", true, v.all_hold(), detail});
  }

  if (cfg.checks.gronwall) out.push_back(from("gronwall_h2", gronwall_check_h2(d.records, p, tol.gronwall_slack)));
  if (cfg.checks.h3_energy_flagged) {
    out.push_back(from("gronwall_h3", gronwall_check_h3(d.records, p, tol.gronwall_slack)));
  }

  if (cfg.checks.transport) {
    double worst = 0.0;
    for (const auto& r : d.records) worst = std::max(worst, std::isnan(r.transport_res) ? INFINITY : r.transport_res);
    const bool ok = worst <= tol.transport && d.chars.smooth;
    std::string detail = fmt("max residual %.3e (tol %.1e)", worst, tol.transport);
    if (!d.chars.smooth) detail += "; q_x <= 0 or q not monotone";
    if (d.chars.near_boundary) detail += "; warning: a characteristic came within 5% of the boundary";
    out.push_back({"transport", true, ok, detail});
  }

  if (cfg.checks.identities) {
    const double DiagRecord::*cols[4] = {&DiagRecord::R_m2, &DiagRecord::R_rho2, &DiagRecord::R_rhox2,
                                         &DiagRecord::R_rhoxx2};
    const char* names[4] = {"identity_m2", "identity_rho2", "identity_rhox2", "identity_rhoxx2"};
    for (int k = 0; k < 4; ++k) {
      if (d.records.size() < 3 || d.identities.size() != d.records.size()) {
        out.push_back({names[k], false, true, "fewer than three records"});
        continue;
      }
      double worst = 0.0, scale = 0.0;
      for (std::size_t i = 1; i + 1 < d.records.size(); ++i) worst = std::max(worst, d.records[i].*cols[k]);
      for (const auto& s : d.identities) scale = std::max(scale, std::abs(s.rhs[k]));
      const bool ok = worst <= tol.identity_rel * scale;
      out.push_back({names[k], true, ok, fmt("max centered residual %.3e, max |rhs| %.3e", worst, scale)});
    }
  }

  if (cfg.checks.symmetry) {
    const std::size_t last = last_trusted_index(d, tol.symmetry_grace_steps);
    out.push_back(from("symmetry", symmetry_check(d.records, tol.symmetry, last)));
    const double until = d.records.empty() ? 0.0 : d.records[last].t;
    out.push_back(from("origin_values", origin_value_check(d.origin, tol.origin, until)));
  }

  if (cfg.checks.riccati) {
    if (!blowup_bound_applies(p)) {
      out.push_back({"riccati", false, true, "needs 1 < k1 <= 3 and k2 >= 0"});
    } else {
      out.push_back(from("riccati", riccati_check(d.origin, p)));
      out.push_back(from("origin_source", origin_source_check(d.origin)));
      if (const auto t = theorem41(p, d.symmetric_data, d.origin, d.report)) {
        out.push_back({"theorem41_bound", true, t->respected,
                       fmt("T_detected/t_final %.17g vs bound %.17g", d.report.t_final, t->bound)});
      }
    }
  }
  return out;
}

bool all_passed(const std::vector<Verdict>& verdicts) {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return !v.applicable || v.passed; });
}

nlohmann::json to_json(const Verdict& v) {
  return {{"name", v.name}, {"applicable", v.applicable}, {"passed", v.passed}, {"detail", v.detail}};
}

nlohmann::json to_json(const Theorem41& t) {
  nlohmann::json j{{"u0_prime_at_zero", t.u0_prime}, {"blowup_bound", t.bound}, {"respected", t.respected}};
  j["T_detected"] = t.t_detected ? nlohmann::json(*t.t_detected) : nlohmann::json(nullptr);
  return j;
}

}  // namespace bfam::cli
