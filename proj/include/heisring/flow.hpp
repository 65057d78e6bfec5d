#pragma once

#include <functional>
#include <vector>

#include "heisring/capacity.hpp"
#include "heisring/coords.hpp"
#include "heisring/core.hpp"

namespace heisring {

// One recorded state of an integral curve of grad_h u0, with the velocity and
// identity diagnostics evaluated at the state.
struct FlowState {
  Point point;
  EllipsoidalCoords coords;
  double tau = 0.0;
  double u_value = 0.0;
  TangentVector velocity;
  double speed_h = 0.0;
  double rr_residual = 0.0;
  double eq8_residual = 0.0;
};

// A discretised flow curve from the inner to the outer boundary.
struct Trajectory {
  std::vector<FlowState> states;
  double horizontal_length = 0.0;
  double max_rr_residual = 0.0;
  double max_eq8_residual = 0.0;
  double max_horizontality = 0.0;
  double max_speed_law_residual = 0.0;
};

struct StepControl {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_steps = 100000;
};

// A Borel density on the ring, evaluated in chart coordinates.
struct Density {
  std::function<double(const EllipsoidalCoords&)> eval;
};

// Velocity field of the extremal flow: grad_h u0 as a Cartesian tangent
// vector, with dt = 2y dx - 2x dy closing the horizontality constraint.
TangentVector flow_rhs(const RingSpec& spec, const Point& p);

// Integrates the flow from to_cartesian(B, phi0, theta0) until the radial
// coordinate reaches A, by adaptive step-doubling RK4. The crossing of r = A
// is resolved by bisection on the final step. Midpoints of accepted steps are
// recorded, so states come in Simpson-ready triples. Requires 0 < phi0 < pi.
Trajectory integrate_trajectory(const RingSpec& spec, double phi0, double theta0,
                                const StepControl& control = {});

// r dr/dtau - sin(phi) (sin^2(phi+theta)/a^2 + cos^2(phi+theta)/b^2) / log(A/B),
// with r dr/dtau obtained by the chain rule through q(p) from the Cartesian
// velocity. Vanishes along the exact flow.
double rr_residual(const RingSpec& spec, const FlowState& s, const TangentVector& velocity);

// cos(phi) r dr - (1/2) sin(phi) r^2 dphi + sin(phi) r^2 dtheta with the chart
// velocity recovered through the inverse chart differential. Vanishes for any
// horizontal velocity.
double eq8_residual(const RingSpec& spec, const FlowState& s, const TangentVector& velocity);

// ∫ rho(gamma) |gamma'|_h dtau by composite Simpson over the recorded states.
double line_integral(const Trajectory& traj, const Density& rho);

// rho0 = |grad_h u0| in chart coordinates; admissible for the flow family with
// unit line integral along every curve, and its fourth-power energy equals the
// closed-form modulus.
Density extremal_density(const RingSpec& spec);

// Two-sided comparison of the Step-2 lower bound for a density.
struct HolderReport {
  double lower_bound = 0.0;    // closed-form modulus
  double rho4_integral = 0.0;  // ∭ rho^4 a^2 b^2 r^3
  long pointwise_violations = 0;
  double worst_violation = 0.0;
  double worst_phi = 0.0;
  double worst_theta = 0.0;
};

// Evaluates ∭ rho^4 a^2 b^2 r^3 against the closed form and checks the
// pointwise inequality
//   sin^2 phi (K^{-1} sin^2(phi+theta) + K cos^2(phi+theta))^2 / log(A/B)^3
//     <= ∫ rho^4 a^2 b^2 r^3 dr
// at every angular node, reporting violations beyond tolerance with their
// worst location. Admissibility of rho for the flow family is the caller's
// responsibility, typically established by sampling line_integral over a seed
// grid; that sampling is a necessary criterion, not a sufficient one.
HolderReport holder_lower_bound(const RingSpec& spec, const Density& rho,
                                const QuadratureSpec& grid);

}  // namespace heisring
