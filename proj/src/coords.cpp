#include "heisring/coords.hpp"

#include <cmath>
#include <stdexcept>

namespace heisring {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kBoundaryRelTol = 1e-9;
}  // namespace

const char* to_string(RingRegion region) {
  switch (region) {
    case RingRegion::interior: return "interior";
    case RingRegion::inner_boundary: return "inner_boundary";
    case RingRegion::inside: return "inside";
    case RingRegion::outer_boundary: return "outer_boundary";
    case RingRegion::exterior: return "exterior";
  }
  return "unknown";
}

RingSpec::RingSpec(double B_, double A_, double a_, double b_)
    : B(B_), A(A_), a(a_), b(b_) {
  if (!(B > 0.0) || !(A > B))
    throw std::invalid_argument("RingSpec: requires 0 < B < A");
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("RingSpec: requires a > 0 and b > 0");
}

double RingSpec::distortion() const { return a >= b ? a / b : b / a; }

double RingSpec::log_ratio() const { return std::log(A / B); }

double RingSpec::gauge4(const Point& p) const {
  const double rho2 = (p.x / a) * (p.x / a) + (p.y / b) * (p.y / b);
  const double tau = p.t / (a * b);
  return rho2 * rho2 + tau * tau;
}

double RingSpec::radius(const Point& p) const { return std::pow(gauge4(p), 0.25); }

Point to_cartesian(const EllipsoidalCoords& c, double a, double b) {
  const double rs = c.r * std::sqrt(std::sin(c.phi));
  return {a * rs * std::cos(c.theta), b * rs * std::sin(c.theta),
          a * b * c.r * c.r * std::cos(c.phi)};
}

EllipsoidalCoords from_cartesian(const Point& p, double a, double b) {
  const double xa = p.x / a;
  const double yb = p.y / b;
  const double rho2 = xa * xa + yb * yb;
  if (rho2 == 0.0)
    throw std::domain_error("from_cartesian: point on the t-axis, theta undefined");
  const double tau = p.t / (a * b);
  const double r = std::pow(rho2 * rho2 + tau * tau, 0.25);
  double cosphi = tau / (r * r);
  if (cosphi > 1.0) cosphi = 1.0;
  if (cosphi < -1.0) cosphi = -1.0;
  double theta = std::atan2(yb, xa);
  if (theta < 0.0) theta += kTwoPi;
  if (theta >= kTwoPi) theta = 0.0;
  return {r, std::acos(cosphi), theta};
}

double chart_jacobian(const EllipsoidalCoords& c, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("chart_jacobian: requires a > 0 and b > 0");
  return a * a * b * b * c.r * c.r * c.r;
}

std::array<std::array<double, 3>, 3> chart_differential(const EllipsoidalCoords& c,
                                                        double a, double b) {
  const double s = std::sin(c.phi);
  const double cp = std::cos(c.phi);
  const double ss = std::sqrt(s);
  const double ct = std::cos(c.theta);
  const double st = std::sin(c.theta);
  const double r = c.r;
  // Columns: d/dr, d/dphi, d/dtheta. The phi column is singular at s = 0.
  const double half_over_ss = (s > 0.0) ? 0.5 / ss : 0.0;
  return {{{a * ss * ct, a * r * cp * ct * half_over_ss, -a * r * ss * st},
           {b * ss * st, b * r * cp * st * half_over_ss, b * r * ss * ct},
           {2.0 * a * b * r * cp, -a * b * r * r * s, 0.0}}};
}

ChartVelocity chart_pullback_velocity(const EllipsoidalCoords& c, double a, double b,
                                      const TangentVector& v) {
  if (!(c.r > 0.0) || !(std::sin(c.phi) > 0.0))
    throw std::domain_error("chart_pullback_velocity: chart differential singular");
  const auto J = chart_differential(c, a, b);
  const double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                     J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
  if (det == 0.0)
    throw std::domain_error("chart_pullback_velocity: chart differential singular");
  const double rhs[3] = {v.dx, v.dy, v.dt};
  double sol[3];
  for (int k = 0; k < 3; ++k) {
    double M[3][3];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) M[i][j] = (j == k) ? rhs[i] : J[i][j];
    sol[k] = (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
              M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
              M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0])) /
             det;
  }
  return {sol[0], sol[1], sol[2]};
}

RingRegion ring_classify(const RingSpec& spec, const Point& p) {
  const double q = spec.gauge4(p);
  const double b4 = std::pow(spec.B, 4);
  const double a4 = std::pow(spec.A, 4);
  if (std::abs(q - b4) <= kBoundaryRelTol * b4) return RingRegion::inner_boundary;
  if (std::abs(q - a4) <= kBoundaryRelTol * a4) return RingRegion::outer_boundary;
  if (q < b4) return RingRegion::interior;
  if (q > a4) return RingRegion::exterior;
  return RingRegion::inside;
}

}  // namespace heisring
