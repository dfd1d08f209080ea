#pragma once

#include "bfamily/grid.hpp"
#include "bfamily/model.hpp"

namespace bfam {

/// z = (u, rho) at time t on a shared grid.
struct State {
  double t = 0.0;
  Field u;
  Field rho;

  const Grid& grid() const { return u.grid(); }
  bool all_finite() const { return u.all_finite() && rho.all_finite(); }
};

struct Tendency {
  Field du;
  Field drho;
};

/// Right-hand side of the nonlocal form
///
///   u_t   = u u_x + d_x (1 - d_xx)^{-1} (k1/2 u^2 + (3-k1)/2 u_x^2 + k2/2 rho^2)
///   rho_t = k3 d_x (u rho)
///
/// The rho equation uses the conservative form so that sum(drho) vanishes
/// and the trapezoid integral of rho is conserved by the semi-discretization.
/// With dealias set, every quadratic product is 2/3-truncated before use.
///
/// Throws OverflowError if the state or the result is non-finite.
Tendency eval_rhs(const State& s, const ModelParams& p, bool dealias = true);

/// Expanded-form rho tendency k3 (u rho_x + u_x rho), kept as a cross-check
/// of the conservative form.
Field rho_tendency_expanded(const State& s, const ModelParams& p);

/// m = u - u_xx.
Field momentum(const State& s);
Field momentum(const Field& u);

/// u0 = (1 - d_xx)^{-1} m0.
Field u_from_m0(const Field& m0);

}  // namespace bfam
