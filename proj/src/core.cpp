#include "heisring/core.hpp"

#include <cmath>
#include <stdexcept>

namespace heisring {

Point group_multiply(const Point& p, const Point& q) {
  // Im(z conj(w)) = y_p x_q - x_p y_q
  return {p.x + q.x, p.y + q.y, p.t + q.t + 2.0 * (p.y * q.x - p.x * q.y)};
}

Point group_inverse(const Point& p) { return {-p.x, -p.y, -p.t}; }

double koranyi_gauge(const Point& p) {
  const double zz = p.x * p.x + p.y * p.y;
  return std::pow(zz * zz + p.t * p.t, 0.25);
}

double koranyi_distance(const Point& p, const Point& q) {
  return koranyi_gauge(group_multiply(group_inverse(p), q));
}

Point left_translate(const Point& g, const Point& q) { return group_multiply(g, q); }

Point rotate(double theta, const Point& q) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {c * q.x - s * q.y, s * q.x + c * q.y, q.t};
}

Point dilate(double delta, const Point& q) {
  if (!(delta > 0.0))
    throw std::invalid_argument("dilate: dilation factor must be positive");
  return {delta * q.x, delta * q.y, delta * delta * q.t};
}

Point conjugate(const Point& q) { return {q.x, -q.y, -q.t}; }

double contact_form(const Point& p, const TangentVector& v) {
  return v.dt + 2.0 * (p.x * v.dy - p.y * v.dx);
}

Frame frame_vectors(const Point& p) {
  return {{1.0, 0.0, 2.0 * p.y}, {0.0, 1.0, -2.0 * p.x}, {0.0, 0.0, 1.0}};
}

ContactLinearMap::ContactLinearMap(double a_, double b_) : a(a_), b(b_) {
  if (!(a > 0.0) || !(b > 0.0))
    throw std::invalid_argument("ContactLinearMap: requires a > 0 and b > 0");
}

Point linear_apply(const ContactLinearMap& L, const Point& p) {
  return {L.a * p.x, L.b * p.y, L.a * L.b * p.t};
}

TangentVector linear_differential(const ContactLinearMap& L, const TangentVector& v) {
  return {L.a * v.dx, L.b * v.dy, L.a * L.b * v.dt};
}

double linear_distortion(const ContactLinearMap& L) {
  const double sum = std::abs(L.a + L.b);
  const double diff = std::abs(L.a - L.b);
  return (sum + diff) / (sum - diff);
}

double contact_pullback_factor(const ContactLinearMap& L, const Point& p,
                               const TangentVector& v) {
  const double denom = contact_form(p, v);
  if (denom == 0.0)
    throw std::domain_error("contact_pullback_factor: omega(p, v) vanishes");
  return contact_form(linear_apply(L, p), linear_differential(L, v)) / denom;
}

}  // namespace heisring
