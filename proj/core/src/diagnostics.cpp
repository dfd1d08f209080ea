#include "bfamily/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bfamily/spectral.hpp"

namespace bfam {

std::string_view to_string(SymmetryMode mode) {
  return mode == SymmetryMode::UOddRhoEven ? "UOddRhoEven" : "UOddRhoOdd";
}

std::optional<SymmetryMode> parse_symmetry_mode(std::string_view text) {
  if (text == "UOddRhoEven") return SymmetryMode::UOddRhoEven;
  if (text == "UOddRhoOdd") return SymmetryMode::UOddRhoOdd;
  return std::nullopt;
}

namespace {

double integral_sq(const Field& f) { return integrate_product(f.values(), f.values(), f.grid().dx()); }

// dx * sum a_j b_j c_j
double integral3(const Field& a, const Field& b, const Field& c) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j] * c[j];
  return acc * a.grid().dx();
}

std::string at_time(std::string_view what, double t) {
  std::ostringstream os;
  os.precision(17);
  os << what << " at t=" << t;
  return os.str();
}

}  // namespace

DiagRecord measure(const State& s, double hs_order) {
  SpectralOps& ops = spectral_ops(s.u.grid_ptr());
  const Field ux = ops.derivative(s.u, 1);
  const Field m = ops.helmholtz(s.u);
  const Field mx = ops.derivative(m, 1);
  const Field rx = ops.derivative(s.rho, 1);
  const Field rxx = ops.derivative(s.rho, 2);

  DiagRecord r;
  r.t = s.t;
  r.l2_u = std::sqrt(integral_sq(s.u));
  r.hs_u = std::sqrt(ops.sobolev_norm_sq(s.u, hs_order));
  r.hsm1_rho = std::sqrt(ops.sobolev_norm_sq(s.rho, hs_order - 1.0));
  r.min_ux = ux.min();
  r.max_ux = ux.max();
  r.sup_rho = s.rho.sup_norm();
  r.sup_rhox = rx.sup_norm();
  const double m2 = integral_sq(m);
  const double r2 = integral_sq(s.rho);
  const double rx2 = integral_sq(rx);
  r.E2 = m2 + r2 + rx2;
  r.E1 = m2 + integral_sq(mx) + r2 + rx2 + integral_sq(rxx);
  r.int_rho = s.rho.integral();
  return r;
}

IdentitySample identity_sample(const State& s, const ModelParams& p) {
  SpectralOps& ops = spectral_ops(s.u.grid_ptr());
  const Field ux = ops.derivative(s.u, 1);
  const Field uxxx = ops.derivative(s.u, 3);
  const Field m = ops.helmholtz(s.u);
  const Field& r = s.rho;
  const Field rx = ops.derivative(r, 1);
  const Field rxx = ops.derivative(r, 2);

  IdentitySample out;
  out.t = s.t;
  out.lhs[0] = integral_sq(m);
  out.lhs[1] = integral_sq(r);
  out.lhs[2] = integral_sq(rx);
  out.lhs[3] = integral_sq(rxx);

  const double ux_r2 = integral3(ux, r, r);
  const double uxxx_r2 = integral3(uxxx, r, r);
  out.rhs[0] = (2.0 * p.k1 - 1.0) * integral3(m, m, ux) - p.k2 * ux_r2 + p.k2 * uxxx_r2;
  out.rhs[1] = p.k3 * ux_r2;
  out.rhs[2] = 3.0 * p.k3 * integral3(ux, rx, rx) - p.k3 * uxxx_r2;
  out.rhs[3] = 5.0 * p.k3 * integral3(ux, rxx, rxx) +
               p.k3 * (2.0 * integral3(uxxx, r, rxx) - 3.0 * integral3(uxxx, rx, rx));
  return out;
}

double three_point_derivative(const std::array<double, 3>& t, const std::array<double, 3>& f, int k) {
  const double x = t[k];
  const double d0 = ((x - t[1]) + (x - t[2])) / ((t[0] - t[1]) * (t[0] - t[2]));
  const double d1 = ((x - t[0]) + (x - t[2])) / ((t[1] - t[0]) * (t[1] - t[2]));
  const double d2 = ((x - t[0]) + (x - t[1])) / ((t[2] - t[0]) * (t[2] - t[1]));
  return f[0] * d0 + f[1] * d1 + f[2] * d2;
}

namespace {

std::array<double, 4> residuals_at(const IdentitySample& a, const IdentitySample& b, const IdentitySample& c, int k) {
  const std::array<double, 3> t{a.t, b.t, c.t};
  const IdentitySample* w[3] = {&a, &b, &c};
  std::array<double, 4> out{};
  for (int i = 0; i < 4; ++i) {
    const double d = three_point_derivative(t, {a.lhs[i], b.lhs[i], c.lhs[i]}, k);
    out[i] = std::abs(d - w[k]->rhs[i]);
  }
  return out;
}

}  // namespace

std::array<double, 4> identity_residuals(const std::array<IdentitySample, 3>& window) {
  return residuals_at(window[0], window[1], window[2], 1);
}

std::array<double, 4> identity_residuals(const State& prev, const State& mid, const State& next,
                                         const ModelParams& p) {
  return identity_residuals({identity_sample(prev, p), identity_sample(mid, p), identity_sample(next, p)});
}

void fill_identity_residuals(std::vector<DiagRecord>& records, const std::vector<IdentitySample>& samples) {
  const std::size_t n = std::min(records.size(), samples.size());
  if (n < 3) return;
  for (std::size_t i = 0; i < n; ++i) {
    std::array<double, 4> r;
    if (i == 0) {
      r = residuals_at(samples[0], samples[1], samples[2], 0);
    } else if (i + 1 == n) {
      r = residuals_at(samples[n - 3], samples[n - 2], samples[n - 1], 2);
    } else {
      r = residuals_at(samples[i - 1], samples[i], samples[i + 1], 1);
    }
    records[i].R_m2 = r[0];
    records[i].R_rho2 = r[1];
    records[i].R_rhox2 = r[2];
    records[i].R_rhoxx2 = r[3];
  }
}

double symmetry_residual(const State& s, SymmetryMode mode) {
  const Grid& g = s.grid();
  const double sign = mode == SymmetryMode::UOddRhoEven ? -1.0 : 1.0;
  double worst = 0.0;
  for (std::size_t j = 1; j < g.size(); ++j) {
    const std::size_t k = g.mirror_index(j);
    worst = std::max(worst, std::abs(s.u[j] + s.u[k]) + std::abs(s.rho[j] + sign * s.rho[k]));
  }
  return worst;
}

OriginSample origin_checks(const State& s, const ModelParams& p) {
  SpectralOps& ops = spectral_ops(s.u.grid_ptr());
  const std::size_t o = s.grid().origin_index();
  const Field ux = ops.derivative(s.u, 1);
  const Field uxx = ops.derivative(s.u, 2);
  Field source(s.u.grid_ptr());
  for (std::size_t j = 0; j < source.size(); ++j) {
    source[j] = 0.5 * p.k1 * s.u[j] * s.u[j] + 0.5 * (3.0 - p.k1) * ux[j] * ux[j] + 0.5 * p.k2 * s.rho[j] * s.rho[j];
  }
  const Field conv = ops.helmholtz_inv(source);
  return {s.t, s.u[o], ux[o], uxx[o], s.rho[o], conv[o]};
}

double gronwall_constant_h2(const ModelParams& p, Branch branch, double M1, double T, double rho0_sup) {
  const double k1 = p.k1, k2 = p.k2, k3 = p.k3;
  switch (branch) {
    case Branch::NegInfUx:
      return (-2.0 * k1 + k2 - 4.0 * k3 + 1.0) * M1 + 2.0 * (k2 - k3) * std::exp(-k3 * M1 * T) * rho0_sup;
    case Branch::PosInfUx:
      return (2.0 * k1 - k2 + 4.0 * k3 - 1.0) * M1 + 2.0 * (k3 - k2) * std::exp(k3 * M1 * T) * rho0_sup;
    case Branch::TwoSidedUx:
      break;
  }
  return (std::abs(2.0 * k1 - 1.0) + std::abs(k3 - k2) + 3.0 * std::abs(k3)) * M1 +
         2.0 * std::abs(k2 - k3) * std::exp(std::abs(k3) * M1 * T) * rho0_sup;
}

namespace {

CheckResult exponential_bound(const std::vector<DiagRecord>& records, double c, double DiagRecord::*energy,
                              double rel_slack, std::string_view name) {
  CheckResult out;
  const double t0 = records.front().t;
  const double e0 = records.front().*energy;
  for (const auto& r : records) {
    const double bound = std::exp(c * (r.t - t0)) * e0;
    if (!(r.*energy <= bound * (1.0 + rel_slack))) {
      out.passed = false;
      out.first_violation_t = r.t;
      out.detail = at_time(std::string(name) + " bound violated", r.t);
      return out;
    }
  }
  std::ostringstream os;
  os.precision(17);
  os << name << " bound holds, c=" << c;
  out.detail = os.str();
  return out;
}

}  // namespace

CheckResult gronwall_check_h2(const std::vector<DiagRecord>& records, const ModelParams& p, double rel_slack) {
  if (records.empty()) return {true, true, std::nullopt, "no records"};
  const Branch branch = classify_scenario(p, Framework::H2).branch;
  double M1 = 0.0;
  for (const auto& r : records) {
    switch (branch) {
      case Branch::NegInfUx: M1 = std::max(M1, -r.min_ux); break;
      case Branch::PosInfUx: M1 = std::max(M1, r.max_ux); break;
      case Branch::TwoSidedUx: M1 = std::max({M1, -r.min_ux, r.max_ux}); break;
    }
  }
  const double T = records.back().t - records.front().t;
  const double c = gronwall_constant_h2(p, branch, M1, T, records.front().sup_rho);
  return exponential_bound(records, c, &DiagRecord::E2, rel_slack, "E2");
}

double gronwall_constant_h3(const ModelParams& p, double M1, double M2, double T, double rho0_sup) {
  const double k1 = p.k1, k2 = p.k2, k3 = p.k3;
  return (-3.0 * k1 + k2 - 9.0 * k3) * M1 +
         3.0 * ((std::abs(2.0 * k2 - k3) + 2.0 * std::abs(k3 - k2)) * std::exp(-k3 * M1 * T) * rho0_sup +
                std::abs(2.0 * k2 + 3.0 * k3) * M2);
}

CheckResult gronwall_check_h3(const std::vector<DiagRecord>& records, const ModelParams& p, double rel_slack) {
  if (classify_scenario(p, Framework::Hs).branch != Branch::NegInfUx) {
    return {false, true, std::nullopt, "H3 bound is only stated for the u_x -> -inf branch"};
  }
  if (records.empty()) return {true, true, std::nullopt, "no records"};
  double M1 = 0.0, M2 = 0.0;
  for (const auto& r : records) {
    M1 = std::max(M1, -r.min_ux);
    M2 = std::max(M2, r.sup_rhox);
  }
  const double T = records.back().t - records.front().t;
  const double c = gronwall_constant_h3(p, M1, M2, T, records.front().sup_rho);
  return exponential_bound(records, c, &DiagRecord::E1, rel_slack, "E1");
}

CheckResult riccati_check(const std::vector<OriginSample>& origin, const ModelParams& p) {
  CheckResult out;
  if (origin.size() < 3) return {false, true, std::nullopt, "fewer than three origin samples"};
  const double a = 0.5 * (p.k1 - 1.0);
  auto tol = [](double h) { return 1e-4 * (1.0 + h * h); };
  auto fail = [&](std::string_view what, double t) {
    out.passed = false;
    out.first_violation_t = t;
    out.detail = at_time(what, t);
    return out;
  };

  for (std::size_t i = 1; i + 1 < origin.size(); ++i) {
    const double dh = three_point_derivative({origin[i - 1].t, origin[i].t, origin[i + 1].t},
                                             {origin[i - 1].ux, origin[i].ux, origin[i + 1].ux}, 1);
    const double h = origin[i].ux;
    if (dh < a * h * h - tol(h)) return fail("dh/dt below (k1-1)/2 h^2", origin[i].t);
  }

  std::size_t start = 0;
  if (!(origin[0].ux > 1e-8)) {
    for (std::size_t i = 1; i < origin.size(); ++i) {
      if (!(origin[i].ux > origin[i - 1].ux)) return fail("h not strictly increasing", origin[i].t);
    }
    while (start < origin.size() && !(origin[start].ux > 0.0)) ++start;
    if (start == origin.size()) return fail("h never became positive", origin.back().t);
  }

  const double h0 = origin[start].ux;
  const double t0 = origin[start].t;
  for (std::size_t i = start; i < origin.size(); ++i) {
    const double h = origin[i].ux;
    if (!(h > 0.0)) return fail("h left (0, inf)", origin[i].t);
    if (1.0 / h > 1.0 / h0 - a * (origin[i].t - t0) + tol(h)) return fail("reciprocal bound violated", origin[i].t);
  }
  std::ostringstream os;
  os.precision(17);
  os << "Riccati bound holds from t0=" << t0 << " with h(t0)=" << h0;
  out.detail = os.str();
  return out;
}

CheckResult origin_source_check(const std::vector<OriginSample>& origin, double tol) {
  for (const auto& o : origin) {
    if (o.pconv < -tol) return {true, false, o.t, at_time("negative origin convolution term", o.t)};
  }
  return {true, true, std::nullopt, "origin convolution term nonnegative"};
}

CheckResult origin_value_check(const std::vector<OriginSample>& origin, double tol, double until) {
  for (const auto& o : origin) {
    if (o.t > until) break;
    if (std::abs(o.u) > tol || std::abs(o.uxx) > tol || std::abs(o.rho) > tol) {
      return {true, false, o.t, at_time("origin value above tolerance", o.t)};
    }
  }
  return {true, true, std::nullopt, "u, u_xx, rho vanish at the origin"};
}

CheckResult conservation_check(const std::vector<DiagRecord>& records, double rel_tol) {
  if (records.empty()) return {true, true, std::nullopt, "no records"};
  const double i0 = records.front().int_rho;
  const double scale = std::max(std::abs(i0), records.front().sup_rho);
  double worst = 0.0;
  for (const auto& r : records) {
    const double drift = std::abs(r.int_rho - i0);
    worst = std::max(worst, drift);
    if (drift > rel_tol * scale) return {true, false, r.t, at_time("int rho drifted", r.t)};
  }
  std::ostringstream os;
  os.precision(3);
  os << "max drift " << worst;
  return {true, true, std::nullopt, os.str()};
}

CheckResult symmetry_check(const std::vector<DiagRecord>& records, double tol, std::size_t last_index) {
  for (std::size_t i = 0; i < records.size() && i <= last_index; ++i) {
    if (!(records[i].symmetry_res <= tol)) {
      return {true, false, records[i].t, at_time("symmetry residual above tolerance", records[i].t)};
    }
  }
  return {true, true, std::nullopt, "symmetry preserved"};
}

Recorder::Recorder(const ModelParams& p, RecorderOptions options, const CharTracker* tracker)
    : p_(p), opt_(options), tracker_(tracker) {
  if (opt_.diag_every == 0) throw std::invalid_argument("outputs.diag_every must be >= 1");
}

void Recorder::record(const State& s, double dt, std::size_t step) {
  DiagRecord r = measure(s, opt_.hs_order);
  r.step = step;
  r.dt = dt;
  if (tracker_) r.transport_res = tracker_->residual(s);
  if (opt_.symmetry) r.symmetry_res = symmetry_residual(s, opt_.symmetry_mode);
  traj_.records.push_back(r);
  if (opt_.identities) traj_.identities.push_back(identity_sample(s, p_));
  if (opt_.origin) traj_.origin.push_back(origin_checks(s, p_));
  last_recorded_step_ = step;
}

void Recorder::on_start(const State& s0) {
  traj_ = {};
  snapshots_taken_ = 0;
  record(s0, 0.0, 0);
  if (opt_.snapshot_every > 0) traj_.snapshots.push_back({snapshots_taken_++, s0});
}

void Recorder::on_step(const StepView& view) {
  last_dt_ = view.dt;
  if (view.step % opt_.diag_every == 0) record(view.after, view.dt, view.step);
  if (opt_.snapshot_every > 0 && view.step % opt_.snapshot_every == 0) {
    traj_.snapshots.push_back({snapshots_taken_++, view.after});
  }
}

void Recorder::on_finish(const State& last, const RunReport& report) {
  if (report.steps != last_recorded_step_) record(last, last_dt_, report.steps);
  if (opt_.snapshot_every > 0 && report.steps % opt_.snapshot_every != 0) {
    traj_.snapshots.push_back({snapshots_taken_++, last});
  }
  if (opt_.identities) fill_identity_residuals(traj_.records, traj_.identities);
  traj_.report = report;
}

}  // namespace bfam
