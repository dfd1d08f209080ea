#include "bfamily/characteristics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <tuple>

#include "bfamily/error.hpp"
#include "bfamily/spectral.hpp"

namespace bfam {

CharField CharField::seed(const Grid& g, std::size_t stride) {
  if (stride == 0) throw std::invalid_argument("characteristics: label stride must be >= 1");
  CharField c;
  for (std::size_t j = 0; j < g.size(); j += stride) c.labels.push_back(g.node(j));
  c.q = c.labels;
  c.qx.assign(c.labels.size(), 1.0);
  c.accumulated_integral.assign(c.labels.size(), 0.0);
  return c;
}

bool CharField::qx_positive() const noexcept {
  return std::all_of(qx.begin(), qx.end(), [](double v) { return v > 0.0; });
}

bool CharField::q_monotone() const noexcept {
  for (std::size_t i = 1; i < q.size(); ++i) {
    if (!(q[i] > q[i - 1])) return false;
  }
  return true;
}

void advance_characteristics(CharField& c, const RkStages& stages, const ModelParams& p, double dt) {
  const std::size_t n = c.size();
  if (n == 0) return;
  SpectralOps& ops = spectral_ops(stages.u[0].grid_ptr());
  const double L = ops.grid().half_length();

  std::vector<double> pts(n);
  std::vector<double> kq[4];
  std::vector<double> ka[4];
  std::vector<double> Q = c.q;
  const double offsets[4] = {0.0, 0.5 * dt, 0.5 * dt, dt};

  for (int i = 0; i < 4; ++i) {
    if (i > 0) {
      for (std::size_t l = 0; l < n; ++l) Q[l] = c.q[l] + offsets[i] * kq[i - 1][l];
    }
    for (std::size_t l = 0; l < n; ++l) pts[l] = -p.k3 * Q[l];
    std::tie(kq[i], ka[i]) = ops.interpolate_with_derivative(stages.u[i], pts);
    for (std::size_t l = 0; l < n; ++l) {
      ka[i][l] *= -p.k3;
      if (!std::isfinite(kq[i][l]) || !std::isfinite(ka[i][l])) {
        throw OverflowError("advance_characteristics: non-finite velocity", i + 1);
      }
    }
  }

  const double w = dt / 6.0;
  c.wrapped = 0;
  for (std::size_t l = 0; l < n; ++l) {
    c.q[l] += w * (kq[0][l] + 2.0 * kq[1][l] + 2.0 * kq[2][l] + kq[3][l]);
    c.accumulated_integral[l] += w * (ka[0][l] + 2.0 * ka[1][l] + 2.0 * ka[2][l] + ka[3][l]);
    c.qx[l] = std::exp(c.accumulated_integral[l]);

    const double x = std::abs(p.k3 * c.q[l]);
    if (x >= L) ++c.wrapped;
    if (x >= 0.95 * L && std::abs(p.k3 * c.labels[l]) < 0.95 * L) c.near_boundary = true;
  }
}

double transport_residual(const State& s, const CharField& c, const Field& rho0, const ModelParams& p) {
  const std::size_t n = c.size();
  if (n == 0) return 0.0;
  SpectralOps& ops = spectral_ops(s.rho.grid_ptr());
  std::vector<double> now(n), then(n);
  for (std::size_t l = 0; l < n; ++l) {
    now[l] = -p.k3 * c.q[l];
    then[l] = -p.k3 * c.labels[l];
  }
  const auto rho_t = ops.interpolate(s.rho, now);
  const auto rho_0 = ops.interpolate(rho0, then);
  double worst = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    worst = std::max(worst, std::abs(rho_t[l] * c.qx[l] - rho_0[l]));
  }
  return worst;
}

std::vector<double> qx_finite_difference(const CharField& c) {
  const std::size_t n = c.size();
  std::vector<double> out(n, kNaN);
  if (n < 2) return out;
  for (std::size_t l = 1; l + 1 < n; ++l) {
    out[l] = (c.q[l + 1] - c.q[l - 1]) / (c.labels[l + 1] - c.labels[l - 1]);
  }
  out[0] = (c.q[1] - c.q[0]) / (c.labels[1] - c.labels[0]);
  out[n - 1] = (c.q[n - 1] - c.q[n - 2]) / (c.labels[n - 1] - c.labels[n - 2]);
  return out;
}

RhoSupVerdict rho_sup_bound_check(const std::vector<DiagRecord>& records, const ModelParams& p, double rel_slack) {
  RhoSupVerdict v;
  if (p.k3 <= 0.0) v.k3_nonpositive = true;
  if (p.k3 >= 0.0) v.k3_nonnegative = true;
  if (records.empty()) return v;

  const double rho0 = records.front().sup_rho;
  const double t0 = records.front().t;
  double m_neg = 0.0, m_pos = 0.0, m_abs = 0.0;
  auto holds = [&](double sup_rho, double exponent) {
    const double bound = std::exp(exponent) * rho0;
    return sup_rho <= bound * (1.0 + rel_slack);
  };
  auto flag = [&](double t) {
    if (!v.first_violation_t) v.first_violation_t = t;
  };

  for (const auto& r : records) {
    m_neg = std::max(m_neg, -r.min_ux);
    m_pos = std::max(m_pos, r.max_ux);
    m_abs = std::max({m_abs, std::abs(r.min_ux), std::abs(r.max_ux)});
    const double t = r.t - t0;
    if (v.k3_nonpositive && !holds(r.sup_rho, -p.k3 * m_neg * t)) {
      v.k3_nonpositive = false;
      flag(r.t);
    }
    if (v.k3_nonnegative && !holds(r.sup_rho, p.k3 * m_pos * t)) {
      v.k3_nonnegative = false;
      flag(r.t);
    }
    if (v.absolute && !holds(r.sup_rho, std::abs(p.k3) * m_abs * t)) {
      v.absolute = false;
      flag(r.t);
    }
  }
  return v;
}

CharTracker::CharTracker(const ModelParams& p, std::size_t stride) : p_(p), stride_(stride) {
  if (stride_ == 0) throw std::invalid_argument("characteristics: label stride must be >= 1");
}

void CharTracker::on_start(const State& s0) {
  field_ = CharField::seed(s0.grid(), stride_);
  rho0_ = s0.rho;
  diffeomorphic_ = true;
}

void CharTracker::on_step(const StepView& view) {
  advance_characteristics(field_, view.stages, p_, view.dt);
  if (!field_.qx_positive() || !field_.q_monotone()) diffeomorphic_ = false;
}

}  // namespace bfam
