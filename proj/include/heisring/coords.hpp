#pragma once

#include <array>

#include "heisring/core.hpp"

namespace heisring {

// Chart coordinates (r, phi, theta) of the Koranyi ellipsoidal chart
//   x = a r sqrt(sin phi) cos theta,
//   y = b r sqrt(sin phi) sin theta,
//   t = a b r^2 cos phi,
// with r >= 0, phi in [0, pi], theta in [0, 2pi).
struct EllipsoidalCoords {
  double r = 0.0;
  double phi = 0.0;
  double theta = 0.0;
};

// Chart components of a velocity vector, (dr, dphi, dtheta).
struct ChartVelocity {
  double dr = 0.0;
  double dphi = 0.0;
  double dtheta = 0.0;
};

// Position of a point relative to an ellipsoidal ring.
enum class RingRegion { interior, inner_boundary, inside, outer_boundary, exterior };

const char* to_string(RingRegion region);

// A Koranyi ellipsoidal ring: the image of the spherical ring of radii B < A
// under the contact linear map L_{a,b}. Membership is decided by
//   q(p) = (x^2/a^2 + y^2/b^2)^2 + t^2/(a^2 b^2),
// which equals r^4 in chart coordinates.
struct RingSpec {
  double B = 1.0;
  double A = 2.0;
  double a = 1.0;
  double b = 1.0;

  RingSpec(double B_, double A_, double a_, double b_);

  double distortion() const;  // K = max(a/b, b/a) >= 1
  double log_ratio() const;   // log(A/B) > 0

  double gauge4(const Point& p) const;   // q(p)
  double radius(const Point& p) const;   // q(p)^{1/4}
};

Point to_cartesian(const EllipsoidalCoords& c, double a, double b);

// Inverse chart. Throws std::domain_error for points on the t-axis
// (x^2/a^2 + y^2/b^2 = 0), where theta is undefined.
EllipsoidalCoords from_cartesian(const Point& p, double a, double b);

// Jacobian determinant of the chart, a^2 b^2 r^3.
double chart_jacobian(const EllipsoidalCoords& c, double a, double b);

// Differential d(x,y,t)/d(r,phi,theta) as rows (dx/d*, dy/d*, dt/d*).
std::array<std::array<double, 3>, 3> chart_differential(const EllipsoidalCoords& c,
                                                        double a, double b);

// Solves the chart differential for (dr, dphi, dtheta) given a Cartesian
// velocity at the chart point. Throws std::domain_error when the differential
// is singular (r = 0 or sin phi = 0).
ChartVelocity chart_pullback_velocity(const EllipsoidalCoords& c, double a, double b,
                                      const TangentVector& v);

RingRegion ring_classify(const RingSpec& spec, const Point& p);

}  // namespace heisring
