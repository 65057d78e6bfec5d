#pragma once

namespace heisring {

// A point (x, y, t) of the first Heisenberg group, identified with C x R
// through z = x + iy.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

// A tangent vector at a point, in the coordinate frame (dx, dy, dt).
struct TangentVector {
  double dx = 0.0;
  double dy = 0.0;
  double dt = 0.0;
};

// Coefficients on the left-invariant frame fields X and Y.
struct HorizontalVector {
  double cx = 0.0;
  double cy = 0.0;
};

// The frame (X_p, Y_p, T) of left-invariant vector fields evaluated at a point.
struct Frame {
  TangentVector X;
  TangentVector Y;
  TangentVector T;
};

// Group law: (z,t)*(w,s) = (z+w, t+s+2 Im(z conj(w))).
Point group_multiply(const Point& p, const Point& q);
Point group_inverse(const Point& p);

// Koranyi gauge |(z,t)| = | |z|^2 - it |^{1/2} and the induced left-invariant
// metric d(p,q) = |p^{-1} * q|.
double koranyi_gauge(const Point& p);
double koranyi_distance(const Point& p, const Point& q);

// Conformal transformations of H^1 (all preserve moduli of curve families).
Point left_translate(const Point& g, const Point& q);
Point rotate(double theta, const Point& q);
Point dilate(double delta, const Point& q);  // throws std::invalid_argument if delta <= 0
Point conjugate(const Point& q);

// Contact form omega = dt + 2(x dy - y dx) evaluated at p on v.
double contact_form(const Point& p, const TangentVector& v);

// X_p = (1, 0, 2y), Y_p = (0, 1, -2x), T = (0, 0, 1).
Frame frame_vectors(const Point& p);

// The linear contact map L(x,y,t) = (ax, by, abt). Restricted to a, b > 0,
// which is the regime of the ellipsoidal ring construction.
struct ContactLinearMap {
  double a = 1.0;
  double b = 1.0;
  ContactLinearMap(double a_, double b_);
};

Point linear_apply(const ContactLinearMap& L, const Point& p);
TangentVector linear_differential(const ContactLinearMap& L, const TangentVector& v);

// Maximal distortion K_L = (|a+b|+|a-b|)/(|a+b|-|a-b|) = max(a/b, b/a).
double linear_distortion(const ContactLinearMap& L);

// omega(L(p), dL(v)) / omega(p, v); constant a*b for any (p, v) with
// omega(p, v) != 0. Throws std::domain_error on degenerate input.
double contact_pullback_factor(const ContactLinearMap& L, const Point& p,
                               const TangentVector& v);

}  // namespace heisring
