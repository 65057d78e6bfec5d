#pragma once

#include <cstdint>
#include <utility>

#include "heisring/coords.hpp"
#include "heisring/fields.hpp"
#include "heisring/quadrature.hpp"

namespace heisring {

// Result of an energy quadrature next to the closed-form reference value.
struct EnergyReport {
  double value = 0.0;
  double closed_form = 0.0;
  double relative_error = 0.0;
  long node_count = 0;
};

struct JIntegrals {
  double j1 = 0.0;
  double j2 = 0.0;
  double j3 = 0.0;
};

// Modulus of the ellipsoidal ring,
//   (3/8 (K^2 + 1/K^2) + 1/4) * pi^2 / log(A/B)^3.
double closed_form_modulus(const RingSpec& spec);

// Quadrature of the conformal energy  ∭ |grad_h f|^4 a^2 b^2 r^3 dr dphi dtheta
// over (B,A) x (0,pi) x (0,2pi). Radial panels are geometrically spaced; the
// angular panels are uniform. Throws std::runtime_error with the offending
// node location if the integrand evaluates non-finite.
EnergyReport energy_quadrature(const RingSpec& spec, const ScalarField& f,
                               const QuadratureSpec& q);

// The three angular integrals over (0,pi) x (0,2pi):
//   j1 = ∬ sin^2 phi sin^4(phi+theta),
//   j2 = ∬ sin^2 phi cos^4(phi+theta),
//   j3 = ∬ 2 sin^2 phi sin^2(phi+theta) cos^2(phi+theta).
// Exact values 3pi^2/8, 3pi^2/8, pi^2/4. Uses n_phi, n_theta and
// nodes_per_panel of the resolution; n_r is ignored.
JIntegrals j_integrals(const QuadratureSpec& resolution);

// (K^2 j1 + j2 / K^2 + j3) / log_ratio^3; with the exact angular integrals
// this reproduces closed_form_modulus.
double assemble_modulus_from_j(double K, double log_ratio, double j1, double j2,
                               double j3);

// A smooth perturbation that vanishes identically on both ring boundaries:
// amplitude * sin(pi log(r/B)/log(A/B)) * P(x,y,t) with P a seeded affine
// profile in scaled coordinates. Carries an analytic horizontal gradient.
ScalarField boundary_bump_field(const RingSpec& spec, std::uint64_t seed,
                                double amplitude);

// (energy of u0, energy of u0 + bump). The second component is never below
// the first up to quadrature error: u0 minimises the energy among admissible
// functions. Throws std::invalid_argument if the bump fails its boundary
// check.
std::pair<double, double> perturbation_extremality(const RingSpec& spec,
                                                   std::uint64_t bump_seed,
                                                   double amplitude,
                                                   const QuadratureSpec& q);

}  // namespace heisring
