#pragma once

#include <functional>

#include "heisring/coords.hpp"
#include "heisring/core.hpp"

namespace heisring {

// A real function on H^1 bundled with its horizontal gradient. `domain` is an
// optional membership predicate consulted by finite differencing; when empty,
// the callables are assumed valid wherever they do not throw. `chart_gradient`
// is an optional fast path evaluating the gradient directly in ellipsoidal
// coordinates, used by the quadrature to avoid inverse-chart calls per node.
struct ScalarField {
  std::function<double(const Point&)> value;
  std::function<HorizontalVector(const Point&)> horizontal_gradient;
  std::function<bool(const Point&)> domain;
  std::function<HorizontalVector(const EllipsoidalCoords&)> chart_gradient;
};

// The extremal admissible function of the ring,
//   u0(p) = log(r(p)/B) / log(A/B),
// equal to 0 on the inner boundary and 1 on the outer one. The value throws
// std::domain_error at the group origin, the gradient additionally on the
// t-axis.
ScalarField u0_field(const RingSpec& spec);

double u0_value(const RingSpec& spec, const Point& p);
HorizontalVector u0_gradient(const RingSpec& spec, const Point& p);
HorizontalVector u0_chart_gradient(const RingSpec& spec, const EllipsoidalCoords& c);

// Central differences along the left-translated coordinate arcs
//   X f(p) ~ [f(p*(h,0,0)) - f(p*(-h,0,0))] / 2h,
//   Y f(p) ~ [f(p*(0,h,0)) - f(p*(0,-h,0))] / 2h.
// Second-order accurate. Throws std::domain_error when a probe point leaves
// the field's domain.
HorizontalVector horizontal_fd_gradient(const ScalarField& f, const Point& p,
                                        double h = 1e-4);

double horizontal_norm(const HorizontalVector& v);

}  // namespace heisring
