#include "heisring/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace heisring {

double u0_value(const RingSpec& spec, const Point& p) {
  const double q = spec.gauge4(p);
  if (q <= 0.0)
    throw std::domain_error("u0_value: undefined at the group origin");
  // log(r/B) with r = q^{1/4}
  return (0.25 * std::log(q) - std::log(spec.B)) / spec.log_ratio();
}

HorizontalVector u0_chart_gradient(const RingSpec& spec, const EllipsoidalCoords& c) {
  const double ss = std::sqrt(std::sin(c.phi));
  const double denom = c.r * spec.log_ratio();
  return {ss * std::sin(c.phi + c.theta) / (spec.a * denom),
          -ss * std::cos(c.phi + c.theta) / (spec.b * denom)};
}

HorizontalVector u0_gradient(const RingSpec& spec, const Point& p) {
  return u0_chart_gradient(spec, from_cartesian(p, spec.a, spec.b));
}

ScalarField u0_field(const RingSpec& spec) {
  ScalarField f;
  f.value = [spec](const Point& p) { return u0_value(spec, p); };
  f.horizontal_gradient = [spec](const Point& p) { return u0_gradient(spec, p); };
  f.domain = [spec](const Point& p) { return spec.gauge4(p) > 0.0; };
  f.chart_gradient = [spec](const EllipsoidalCoords& c) {
    return u0_chart_gradient(spec, c);
  };
  return f;
}

HorizontalVector horizontal_fd_gradient(const ScalarField& f, const Point& p, double h) {
  if (!(h > 0.0))
    throw std::invalid_argument("horizontal_fd_gradient: step must be positive");
  const Point probes[4] = {
      group_multiply(p, {h, 0.0, 0.0}), group_multiply(p, {-h, 0.0, 0.0}),
      group_multiply(p, {0.0, h, 0.0}), group_multiply(p, {0.0, -h, 0.0})};
  if (f.domain) {
    for (const Point& q : probes)
      if (!f.domain(q))
        throw std::domain_error("horizontal_fd_gradient: probe escapes field domain");
  }
  const double fx1 = f.value(probes[0]);
  const double fx0 = f.value(probes[1]);
  const double fy1 = f.value(probes[2]);
  const double fy0 = f.value(probes[3]);
  return {(fx1 - fx0) / (2.0 * h), (fy1 - fy0) / (2.0 * h)};
}

double horizontal_norm(const HorizontalVector& v) { return std::hypot(v.cx, v.cy); }

}  // namespace heisring
