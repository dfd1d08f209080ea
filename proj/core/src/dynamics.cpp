#include "bfamily/dynamics.hpp"

#include "bfamily/error.hpp"
#include "bfamily/spectral.hpp"

namespace bfam {

Tendency eval_rhs(const State& s, const ModelParams& p, bool dealias) {
  if (!s.all_finite()) throw OverflowError("eval_rhs: state is not finite");
  SpectralOps& ops = spectral_ops(s.u.grid_ptr());
  auto truncate = [&](Field f) { return dealias ? ops.dealias(f) : f; };

  const Field ux = ops.derivative(s.u, 1);
  const std::size_t n = s.u.size();

  Field source(s.u.grid_ptr());
  Field advect(s.u.grid_ptr());
  Field flux(s.u.grid_ptr());
  const double a = 0.5 * p.k1, b = 0.5 * (3.0 - p.k1), c = 0.5 * p.k2;
  for (std::size_t j = 0; j < n; ++j) {
    const double u = s.u[j], du = ux[j], r = s.rho[j];
    source[j] = a * u * u + b * du * du + c * r * r;
    advect[j] = u * du;
    flux[j] = u * r;
  }

  Tendency out{truncate(std::move(advect)), Field{}};
  out.du += ops.dx_helmholtz_inv(truncate(std::move(source)));
  out.drho = ops.derivative(truncate(std::move(flux)), 1);
  out.drho *= p.k3;

  if (!out.du.all_finite() || !out.drho.all_finite()) throw OverflowError("eval_rhs: non-finite tendency");
  return out;
}

Field rho_tendency_expanded(const State& s, const ModelParams& p) {
  const Field ux = derivative(s.u, 1);
  const Field rx = derivative(s.rho, 1);
  Field out = s.u * rx + ux * s.rho;
  out *= p.k3;
  return out;
}

Field momentum(const Field& u) { return helmholtz(u); }
Field momentum(const State& s) { return momentum(s.u); }

Field u_from_m0(const Field& m0) { return helmholtz_inv(m0); }

}  // namespace bfam
