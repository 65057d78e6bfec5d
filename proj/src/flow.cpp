#include "heisring/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heisring/fields.hpp"

namespace heisring {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// Flow state augmented with accumulated horizontal length, so the arclength
// shares the integrator's order and step control.
struct AugState {
  Point p;
  double len = 0.0;
};

struct AugRate {
  TangentVector v;
  double dlen = 0.0;
};

AugRate aug_rhs(const RingSpec& spec, const AugState& s) {
  const TangentVector v = flow_rhs(spec, s.p);
  return {v, std::hypot(v.dx, v.dy)};
}

AugState axpy(const AugState& s, double h, const AugRate& r) {
  return {{s.p.x + h * r.v.dx, s.p.y + h * r.v.dy, s.p.t + h * r.v.dt},
          s.len + h * r.dlen};
}

AugState rk4_step(const RingSpec& spec, const AugState& s, double h) {
  const AugRate k1 = aug_rhs(spec, s);
  const AugRate k2 = aug_rhs(spec, axpy(s, 0.5 * h, k1));
  const AugRate k3 = aug_rhs(spec, axpy(s, 0.5 * h, k2));
  const AugRate k4 = aug_rhs(spec, axpy(s, h, k3));
  return {{s.p.x + h / 6.0 * (k1.v.dx + 2.0 * k2.v.dx + 2.0 * k3.v.dx + k4.v.dx),
           s.p.y + h / 6.0 * (k1.v.dy + 2.0 * k2.v.dy + 2.0 * k3.v.dy + k4.v.dy),
           s.p.t + h / 6.0 * (k1.v.dt + 2.0 * k2.v.dt + 2.0 * k3.v.dt + k4.v.dt)},
          s.len + h / 6.0 * (k1.dlen + 2.0 * k2.dlen + 2.0 * k3.dlen + k4.dlen)};
}

struct DoubledStep {
  AugState mid;
  AugState end;    // Richardson-extrapolated endpoint
  double err_norm; // scaled so <= 1 means acceptable
};

DoubledStep doubled_step(const RingSpec& spec, const AugState& s, double h,
                         const StepControl& control) {
  const AugState full = rk4_step(spec, s, h);
  const AugState mid = rk4_step(spec, s, 0.5 * h);
  const AugState fine = rk4_step(spec, mid, 0.5 * h);
  const double df[4] = {fine.p.x - full.p.x, fine.p.y - full.p.y, fine.p.t - full.p.t,
                        fine.len - full.len};
  const double sp[4] = {s.p.x, s.p.y, s.p.t, s.len};
  const double sf[4] = {fine.p.x, fine.p.y, fine.p.t, fine.len};
  double err = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double scale =
        control.abs_tol + control.rel_tol * std::max(std::abs(sp[i]), std::abs(sf[i]));
    err = std::max(err, std::abs(df[i]) / (15.0 * scale));
  }
  const AugState extrapolated = {{fine.p.x + df[0] / 15.0, fine.p.y + df[1] / 15.0,
                                  fine.p.t + df[2] / 15.0},
                                 fine.len + df[3] / 15.0};
  return {mid, extrapolated, err};
}

double speed_law_value(const RingSpec& spec, const FlowState& s, double r_dot) {
  return std::sqrt(std::max(0.0, r_dot) / (s.coords.r * spec.log_ratio()));
}

double radial_rate(const RingSpec& spec, const Point& p, const TangentVector& v,
                   double r) {
  // dq/dtau through the full Euclidean gradient of the defining quartic, then
  // d(r)/dtau = dq / (4 r^3).
  const double xa = p.x / spec.a, yb = p.y / spec.b;
  const double rho2 = xa * xa + yb * yb;
  const double ab2 = spec.a * spec.a * spec.b * spec.b;
  const double qdot = 4.0 * p.x * rho2 / (spec.a * spec.a) * v.dx +
                      4.0 * p.y * rho2 / (spec.b * spec.b) * v.dy +
                      2.0 * p.t / ab2 * v.dt;
  return qdot / (4.0 * r * r * r);
}

}  // namespace

TangentVector flow_rhs(const RingSpec& spec, const Point& p) {
  const HorizontalVector g = u0_gradient(spec, p);
  return {g.cx, g.cy, 2.0 * (p.y * g.cx - p.x * g.cy)};
}

double rr_residual(const RingSpec& spec, const FlowState& s, const TangentVector& velocity) {
  const double r = s.coords.r;
  const double r_dot = radial_rate(spec, s.point, velocity, r);
  const double sn = std::sin(s.coords.phi + s.coords.theta);
  const double cn = std::cos(s.coords.phi + s.coords.theta);
  const double target = std::sin(s.coords.phi) *
                        (sn * sn / (spec.a * spec.a) + cn * cn / (spec.b * spec.b)) /
                        spec.log_ratio();
  return r * r_dot - target;
}

double eq8_residual(const RingSpec& spec, const FlowState& s, const TangentVector& velocity) {
  const ChartVelocity cv = chart_pullback_velocity(s.coords, spec.a, spec.b, velocity);
  const double r = s.coords.r;
  const double sphi = std::sin(s.coords.phi);
  const double cphi = std::cos(s.coords.phi);
  return cphi * r * cv.dr - 0.5 * sphi * r * r * cv.dphi + sphi * r * r * cv.dtheta;
}

Trajectory integrate_trajectory(const RingSpec& spec, double phi0, double theta0,
                                const StepControl& control) {
  if (!(phi0 > 0.0) || !(phi0 < kPi))
    throw std::invalid_argument("integrate_trajectory: requires 0 < phi0 < pi");
  if (control.max_steps < 1)
    throw std::invalid_argument("integrate_trajectory: max_steps must be positive");

  Trajectory traj;

  auto make_state = [&spec](double tau, const Point& p) {
    FlowState s;
    s.point = p;
    try {
      s.coords = from_cartesian(p, spec.a, spec.b);
    } catch (const std::domain_error&) {
      throw std::runtime_error(
          "integrate_trajectory: trajectory reached the chart axis (bug)");
    }
    if (!(s.coords.phi > 0.0) || !(s.coords.phi < kPi))
      throw std::runtime_error(
          "integrate_trajectory: trajectory left the chart interior (bug)");
    s.tau = tau;
    s.u_value = u0_value(spec, p);
    s.velocity = flow_rhs(spec, p);
    s.speed_h = std::hypot(s.velocity.dx, s.velocity.dy);
    return s;
  };

  auto record = [&](FlowState s) {
    const RingSpec& rs = spec;
    s.rr_residual = rr_residual(rs, s, s.velocity);
    s.eq8_residual = eq8_residual(rs, s, s.velocity);
    const double r_dot = radial_rate(rs, s.point, s.velocity, s.coords.r);
    const double law = speed_law_value(rs, s, r_dot);
    traj.max_rr_residual = std::max(traj.max_rr_residual, std::abs(s.rr_residual));
    traj.max_eq8_residual = std::max(traj.max_eq8_residual, std::abs(s.eq8_residual));
    traj.max_horizontality =
        std::max(traj.max_horizontality, std::abs(contact_form(s.point, s.velocity)));
    traj.max_speed_law_residual =
        std::max(traj.max_speed_law_residual, std::abs(s.speed_h - law));
    traj.states.push_back(std::move(s));
  };

  const Point start = to_cartesian({spec.B, phi0, theta0}, spec.a, spec.b);
  record(make_state(0.0, start));

  // The planar spherical traversal takes tau = log(A/B) (A^2 - B^2) / 2; use it
  // to size the first trial step.
  const double tau_scale = spec.log_ratio() * (spec.A * spec.A - spec.B * spec.B) / 2.0;
  double h = tau_scale / 50.0;
  double tau = 0.0;
  AugState s{start, 0.0};

  for (int step = 0; step < control.max_steps; ++step) {
    if (spec.radius(s.p) >= spec.A * (1.0 - 1e-9)) {  // already on the boundary
      traj.horizontal_length = s.len;
      return traj;
    }
    const DoubledStep trial = doubled_step(spec, s, h, control);
    if (trial.err_norm > 1.0) {
      h *= std::max(0.1, 0.9 * std::pow(trial.err_norm, -0.2));
      continue;
    }
    if (spec.radius(trial.end.p) >= spec.A || spec.radius(trial.mid.p) >= spec.A) {
      // Bisect the step fraction so the endpoint lands on r = A.
      double f_lo = 0.0, f_hi = 1.0;
      for (int it = 0; it < 80; ++it) {
        const double f = 0.5 * (f_lo + f_hi);
        const DoubledStep part = doubled_step(spec, s, f * h, control);
        const double r_end = spec.radius(part.end.p);
        if (r_end >= spec.A)
          f_hi = f;
        else
          f_lo = f;
        if (std::abs(r_end - spec.A) <= 1e-12 * spec.A) {
          f_hi = f;
          break;
        }
      }
      const double hf = f_hi * h;
      const DoubledStep last = doubled_step(spec, s, hf, control);
      record(make_state(tau + 0.5 * hf, last.mid.p));
      record(make_state(tau + hf, last.end.p));
      traj.horizontal_length = last.end.len;
      return traj;
    }
    record(make_state(tau + 0.5 * h, trial.mid.p));
    record(make_state(tau + h, trial.end.p));
    s = trial.end;
    tau += h;
    h *= std::min(4.0, std::max(0.5, 0.9 * std::pow(std::max(trial.err_norm, 1e-16), -0.2)));
  }
  throw std::runtime_error("integrate_trajectory: max_steps exceeded before reaching r = A");
}

double line_integral(const Trajectory& traj, const Density& rho) {
  if (traj.states.size() < 3) return 0.0;
  double total = 0.0;
  for (size_t i = 0; i + 2 < traj.states.size(); i += 2) {
    const FlowState& s0 = traj.states[i];
    const FlowState& s1 = traj.states[i + 1];
    const FlowState& s2 = traj.states[i + 2];
    const double h = s2.tau - s0.tau;
    total += h / 6.0 *
             (rho.eval(s0.coords) * s0.speed_h + 4.0 * rho.eval(s1.coords) * s1.speed_h +
              rho.eval(s2.coords) * s2.speed_h);
  }
  return total;
}

Density extremal_density(const RingSpec& spec) {
  const RingSpec rs = spec;
  return {[rs](const EllipsoidalCoords& c) {
    const double sn = std::sin(c.phi + c.theta);
    const double cn = std::cos(c.phi + c.theta);
    return std::sqrt(std::sin(c.phi)) *
           std::sqrt(sn * sn / (rs.a * rs.a) + cn * cn / (rs.b * rs.b)) /
           (c.r * rs.log_ratio());
  }};
}

HolderReport holder_lower_bound(const RingSpec& spec, const Density& rho,
                                const QuadratureSpec& grid) {
  const PanelRule rr = composite_gauss(spec.B, spec.A, grid.n_r, grid.nodes_per_panel, true);
  const PanelRule rp = composite_gauss(0.0, kPi, grid.n_phi, grid.nodes_per_panel);
  const PanelRule rt = composite_gauss(0.0, 2.0 * kPi, grid.n_theta, grid.nodes_per_panel);
  const double ab2 = spec.a * spec.a * spec.b * spec.b;
  const double K = spec.distortion();
  const double lr3 = std::pow(spec.log_ratio(), 3);

  HolderReport report;
  report.lower_bound = closed_form_modulus(spec);
  double total = 0.0;
  for (size_t j = 0; j < rp.nodes.size(); ++j) {
    const double phi = rp.nodes[j];
    const double s2 = std::sin(phi) * std::sin(phi);
    for (size_t k = 0; k < rt.nodes.size(); ++k) {
      const double theta = rt.nodes[k];
      double radial = 0.0;
      for (size_t i = 0; i < rr.nodes.size(); ++i) {
        const double d = rho.eval({rr.nodes[i], phi, theta});
        radial += rr.weights[i] * d * d * d * d * ab2 * std::pow(rr.nodes[i], 3);
      }
      const double sn = std::sin(phi + theta);
      const double cn = std::cos(phi + theta);
      const double mix = sn * sn / K + K * cn * cn;
      const double lhs = s2 * mix * mix / lr3;
      const double slack = lhs - radial;
      if (slack > 1e-8 * std::max(std::abs(lhs), std::abs(radial)) + 1e-14) {
        ++report.pointwise_violations;
        if (slack > report.worst_violation) {
          report.worst_violation = slack;
          report.worst_phi = phi;
          report.worst_theta = theta;
        }
      }
      total += rp.weights[j] * rt.weights[k] * radial;
    }
  }
  report.rho4_integral = total;
  return report;
}

}  // namespace heisring
