#include <cmath>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "heisring/fields.hpp"
#include "heisring/flow.hpp"
#include "test_util.hpp"

using namespace heisring;
using heisring::testing::random_interior_coords;

namespace {

const double kE = std::exp(1.0);
bool near(double x, double y, double tol = 1e-12) { return std::abs(x - y) <= tol; }

// Plain fixed-step RK4 reference, independent of the adaptive integrator.
Point reference_endpoint(const RingSpec& spec, double phi0, double theta0, double h) {
  auto rhs = [&spec](const Point& p) { return flow_rhs(spec, p); };
  auto step = [&rhs](const Point& p, double hh) {
    const TangentVector k1 = rhs(p);
    const TangentVector k2 = rhs({p.x + 0.5 * hh * k1.dx, p.y + 0.5 * hh * k1.dy,
                                  p.t + 0.5 * hh * k1.dt});
    const TangentVector k3 = rhs({p.x + 0.5 * hh * k2.dx, p.y + 0.5 * hh * k2.dy,
                                  p.t + 0.5 * hh * k2.dt});
    const TangentVector k4 =
        rhs({p.x + hh * k3.dx, p.y + hh * k3.dy, p.t + hh * k3.dt});
    return Point{p.x + hh / 6 * (k1.dx + 2 * k2.dx + 2 * k3.dx + k4.dx),
                 p.y + hh / 6 * (k1.dy + 2 * k2.dy + 2 * k3.dy + k4.dy),
                 p.t + hh / 6 * (k1.dt + 2 * k2.dt + 2 * k3.dt + k4.dt)};
  };
  Point p = to_cartesian({spec.B, phi0, theta0}, spec.a, spec.b);
  for (int i = 0; i < 20000000; ++i) {
    const Point next = step(p, h);
    if (spec.radius(next) >= spec.A) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (spec.radius(step(p, mid)) >= spec.A)
          hi = mid;
        else
          lo = mid;
      }
      return step(p, hi);
    }
    p = next;
  }
  FAIL("reference integration did not reach the outer boundary");
  return p;
}

}  // namespace

TEST_CASE("flow velocity is horizontal and points along the gradient") {
  const RingSpec spec(1.0, kE, 1.0, 1.0);
  const TangentVector v = flow_rhs(spec, {1, 0, 0});
  CHECK(near(v.dx, 1.0));
  CHECK(near(v.dy, 0.0));
  CHECK(near(v.dt, 0.0));

  const RingSpec stretched(1.0, 3.0, 2.0, 0.8);
  std::mt19937_64 rng(51);
  for (int i = 0; i < 100; ++i) {
    const EllipsoidalCoords c = random_interior_coords(rng, stretched.B, stretched.A);
    const Point p = to_cartesian(c, stretched.a, stretched.b);
    const TangentVector w = flow_rhs(stretched, p);
    CHECK(std::abs(contact_form(p, w)) <= 1e-14);

    // directional derivative of u0 along the flow equals |grad u0|^2
    const double eps = 1e-6;
    const double up = u0_value(stretched, {p.x + eps * w.dx, p.y + eps * w.dy,
                                           p.t + eps * w.dt});
    const double um = u0_value(stretched, {p.x - eps * w.dx, p.y - eps * w.dy,
                                           p.t - eps * w.dt});
    const HorizontalVector g = u0_gradient(stretched, p);
    const double norm2 = g.cx * g.cx + g.cy * g.cy;
    CHECK(std::abs((up - um) / (2 * eps) - norm2) <= 1e-7 * (1.0 + norm2));
  }
}

TEST_CASE("spherical equatorial trajectory stays planar and matches the analytic law") {
  // For a = b and phi0 = pi/2, theta0 = 0 the curve is x(tau) = sqrt(1 + 2 tau),
  // y = t = 0, leaving at x = A.
  const RingSpec spec(1.0, kE, 1.0, 1.0);
  const Trajectory traj = integrate_trajectory(spec, M_PI / 2, 0.0);
  REQUIRE(traj.states.size() >= 3);
  for (const FlowState& s : traj.states) {
    CHECK(std::abs(s.point.y) <= 1e-12);
    CHECK(std::abs(s.point.t) <= 1e-12);
    CHECK(std::abs(s.point.x - std::sqrt(1.0 + 2.0 * s.tau)) <= 1e-9);
  }
  const FlowState& last = traj.states.back();
  CHECK(std::abs(last.point.x - kE) <= 1e-8);
  CHECK(std::abs(last.tau - (kE * kE - 1.0) / 2.0) <= 1e-7);
  CHECK(std::abs(last.u_value - 1.0) <= 1e-8);
  CHECK(std::abs(last.coords.r - spec.A) <= 1e-6);

  // horizontal length of the segment equals A - B in this flat case
  CHECK(std::abs(traj.horizontal_length - (kE - 1.0)) <= 1e-8);
}

TEST_CASE("adaptive endpoint agrees with a fine fixed-step reference") {
  const RingSpec spec(1.0, 2.0, 1.6, 0.9);
  const double phi0 = 1.1, theta0 = 2.3;
  const Trajectory traj = integrate_trajectory(spec, phi0, theta0);
  const Point ref = reference_endpoint(spec, phi0, theta0, 2e-4);
  const FlowState& last = traj.states.back();
  CHECK(std::abs(last.point.x - ref.x) <= 1e-7);
  CHECK(std::abs(last.point.y - ref.y) <= 1e-7);
  CHECK(std::abs(last.point.t - ref.t) <= 1e-7);
}

TEST_CASE("trajectories cross the ring with controlled diagnostics") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  for (double phi0 : {0.4, 1.2, 2.0, 2.8}) {
    for (double theta0 : {0.0, 1.0, 3.5, 5.5}) {
      const Trajectory traj = integrate_trajectory(spec, phi0, theta0);
      const FlowState& first = traj.states.front();
      const FlowState& last = traj.states.back();
      CHECK(std::abs(first.coords.r - spec.B) <= 1e-12);
      CHECK(std::abs(last.coords.r - spec.A) <= 1e-6);
      CHECK(traj.max_rr_residual <= 1e-8);
      CHECK(traj.max_eq8_residual <= 1e-8);
      CHECK(traj.max_horizontality <= 1e-10);
      CHECK(traj.max_speed_law_residual <= 1e-8);
      for (size_t i = 1; i < traj.states.size(); ++i)
        CHECK(traj.states[i].u_value > traj.states[i - 1].u_value);
      CHECK(traj.horizontal_length > 0.0);
    }
  }
}

TEST_CASE("halved tolerances keep the residuals within the bound") {
  const RingSpec spec(1.0, kE, 1.5, 1.0);
  StepControl tight;
  tight.rel_tol = 5e-11;
  tight.abs_tol = 5e-13;
  const Trajectory traj = integrate_trajectory(spec, 0.9, 0.7, tight);
  CHECK(traj.max_rr_residual <= 1e-8);
  CHECK(traj.max_eq8_residual <= 1e-8);
}

TEST_CASE("integrator failure modes") {
  const RingSpec spec(1.0, kE, 1.0, 1.0);
  CHECK_THROWS_AS(integrate_trajectory(spec, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(integrate_trajectory(spec, M_PI, 0.0), std::invalid_argument);
  StepControl starved;
  starved.max_steps = 3;
  CHECK_THROWS_AS(integrate_trajectory(spec, 1.0, 0.0, starved), std::runtime_error);
}

TEST_CASE("rr residual identity") {
  const RingSpec spec(1.0, kE, 1.0, 1.0);
  const Trajectory traj = integrate_trajectory(spec, 1.3, 0.4);
  const FlowState& s = traj.states[traj.states.size() / 2];

  // zeroed velocity exposes the nonzero target term
  const double at_rest = rr_residual(spec, s, {0, 0, 0});
  const double sn = std::sin(s.coords.phi + s.coords.theta);
  const double cn = std::cos(s.coords.phi + s.coords.theta);
  const double target = std::sin(s.coords.phi) * (sn * sn + cn * cn) / spec.log_ratio();
  CHECK(near(at_rest, -target, 1e-12));
  CHECK(std::abs(at_rest) > 1e-3);

  // equatorial state: both sides equal 1/log(A/B)
  const FlowState eq{{1, 0, 0}, {1.0, M_PI / 2, 0.0}, 0.0, 0.0, {1, 0, 0}, 1.0, 0, 0};
  CHECK(near(rr_residual(spec, eq, {1, 0, 0}), 0.0, 1e-14));
}

TEST_CASE("eq8 residual identity") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  const Trajectory traj = integrate_trajectory(spec, 1.7, 5.0);
  const FlowState& s = traj.states[traj.states.size() / 3];
  CHECK(std::abs(eq8_residual(spec, s, s.velocity)) <= 1e-10);

  // a generic non-horizontal velocity violates the identity
  CHECK(std::abs(eq8_residual(spec, s, {0.3, -0.2, 0.9})) > 1e-6);

  // planar spherical trajectory: every term vanishes individually
  const RingSpec unit(1.0, kE, 1.0, 1.0);
  const Trajectory planar = integrate_trajectory(unit, M_PI / 2, 0.0);
  for (const FlowState& st : planar.states) {
    const ChartVelocity cv = chart_pullback_velocity(st.coords, 1.0, 1.0, st.velocity);
    CHECK(std::abs(std::cos(st.coords.phi)) <= 1e-10);
    CHECK(std::abs(cv.dphi) <= 1e-10);
    CHECK(std::abs(cv.dtheta) <= 1e-10);
  }
}

TEST_CASE("line integrals of densities") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  const Trajectory traj = integrate_trajectory(spec, 1.0, 0.5);

  const Density zero{[](const EllipsoidalCoords&) { return 0.0; }};
  CHECK(line_integral(traj, zero) == 0.0);

  const Density rho0 = extremal_density(spec);
  const double li = line_integral(traj, rho0);
  CHECK(std::abs(li - 1.0) <= 1e-6);

  const Density doubled{[rho0](const EllipsoidalCoords& c) { return 2.0 * rho0.eval(c); }};
  CHECK(std::abs(line_integral(traj, doubled) - 2.0) <= 2e-6);
}

TEST_CASE("unit line integral across a seed grid") {
  const RingSpec spec(1.0, kE, 1.5, 1.0);
  const Density rho0 = extremal_density(spec);
  for (int i = 0; i < 10; ++i) {
    const double phi0 = M_PI * (i + 0.5) / 10.0;
    for (int j = 0; j < 10; ++j) {
      const double theta0 = 2.0 * M_PI * j / 10.0;
      const Trajectory traj = integrate_trajectory(spec, phi0, theta0);
      CHECK(std::abs(line_integral(traj, rho0) - 1.0) <= 1e-6);
    }
  }
}

TEST_CASE("extremal density closed form") {
  const RingSpec spec(1.0, kE, 1.0, 1.0);
  const Density rho0 = extremal_density(spec);
  for (double r : {1.1, 1.7, 2.4}) {
    CHECK(near(rho0.eval({r, M_PI / 2, 0.0}), 1.0 / r, 1e-12));
  }
}

TEST_CASE("holder lower bound") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  const QuadratureSpec grid(8, 8, 8, 4);
  const Density rho0 = extremal_density(spec);

  const HolderReport eq = holder_lower_bound(spec, rho0, grid);
  CHECK(std::abs(eq.rho4_integral - eq.lower_bound) <= 1e-6 * eq.lower_bound);
  CHECK(eq.pointwise_violations == 0);

  const Density padded{[rho0](const EllipsoidalCoords& c) {
    const double s = std::sin(c.theta);
    return rho0.eval(c) * (1.0 + 0.3 * s * s);
  }};
  const HolderReport strict = holder_lower_bound(spec, padded, grid);
  CHECK(strict.pointwise_violations == 0);
  CHECK(strict.rho4_integral > eq.rho4_integral * 1.01);

  const Density vanish{[](const EllipsoidalCoords&) { return 0.0; }};
  const HolderReport broken = holder_lower_bound(spec, vanish, grid);
  CHECK(broken.pointwise_violations == 32l * 32l);
  CHECK(broken.worst_violation > 0.0);
  CHECK(broken.rho4_integral == 0.0);
}
