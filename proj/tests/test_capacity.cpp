#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <doctest.h>

#include "heisring/capacity.hpp"
#include "test_util.hpp"

using namespace heisring;

namespace {
const double kE = std::exp(1.0);
const double kPi2 = M_PI * M_PI;
bool near(double x, double y, double tol = 1e-12) { return std::abs(x - y) <= tol; }
}  // namespace

TEST_CASE("gauss legendre rules integrate polynomials exactly") {
  // order n is exact through degree 2n-1; compare against monomial integrals
  for (int n : {2, 3, 4, 6, 8}) {
    const PanelRule rule = gauss_legendre(n);
    double wsum = 0.0;
    for (double w : rule.weights) wsum += w;
    CHECK(near(wsum, 2.0, 1e-14));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double acc = 0.0;
      for (size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * std::pow(rule.nodes[i], k);
      const double exact = (k % 2 == 1) ? 0.0 : 2.0 / (k + 1);
      CHECK(near(acc, exact, 1e-13));
    }
  }
}

TEST_CASE("composite rule covers the interval") {
  const PanelRule rule = composite_gauss(1.0, 10.0, 8, 4, true);
  double len = 0.0;
  for (double w : rule.weights) len += w;
  CHECK(near(len, 9.0, 1e-12));
  // geometric spacing resolves 1/r uniformly: compare with log
  double acc = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) acc += rule.weights[i] / rule.nodes[i];
  CHECK(near(acc, std::log(10.0), 1e-8));
  double acc6 = 0.0;
  const PanelRule rule6 = composite_gauss(1.0, 10.0, 8, 6, true);
  for (size_t i = 0; i < rule6.nodes.size(); ++i) acc6 += rule6.weights[i] / rule6.nodes[i];
  CHECK(near(acc6, std::log(10.0), 1e-12));
  CHECK_THROWS_AS(composite_gauss(0.0, 1.0, 4, 4, true), std::invalid_argument);
  CHECK_THROWS_AS(composite_gauss(2.0, 1.0, 4, 4), std::invalid_argument);
}

TEST_CASE("quadrature spec validation") {
  CHECK_THROWS_AS(QuadratureSpec(0, 8, 8, 4), std::invalid_argument);
  CHECK_THROWS_AS(QuadratureSpec(8, 8, 8, 1), std::invalid_argument);
  CHECK(QuadratureSpec(8, 8, 8, 4).node_count_3d() == 32l * 32l * 32l);
}

TEST_CASE("closed form modulus") {
  CHECK(near(closed_form_modulus(RingSpec(1.0, kE, 1.0, 1.0)), kPi2, 1e-12));
  CHECK(near(closed_form_modulus(RingSpec(1.0, kE, 2.0, 1.0)), 59.0 / 32.0 * kPi2, 1e-12));
  // depends on A/B only
  CHECK(near(closed_form_modulus(RingSpec(2.0, 2.0 * kE, 2.0, 1.0)),
             59.0 / 32.0 * kPi2, 1e-12));
}

TEST_CASE("closed form scale and swap invariance") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> u(0.3, 3.0);
  for (int i = 0; i < 100; ++i) {
    const double B = u(rng), ratio = 1.0 + u(rng), a = u(rng), b = u(rng);
    const RingSpec spec(B, B * ratio, a, b);
    const RingSpec swapped(B, B * ratio, b, a);
    CHECK(closed_form_modulus(spec) == closed_form_modulus(swapped));
    // doubling both radii is exact in floating point
    const RingSpec doubled(2.0 * B, 2.0 * B * ratio, a, b);
    CHECK(closed_form_modulus(spec) == closed_form_modulus(doubled));
    const RingSpec scaled(1.7 * B, 1.7 * B * ratio, a, b);
    const double m0 = closed_form_modulus(spec);
    CHECK(std::abs(closed_form_modulus(scaled) - m0) <= 1e-13 * m0);
  }
}

TEST_CASE("closed form strictly increases with K") {
  const double ratio = 3.0;
  double prev = 0.0;
  for (double K = 1.0; K <= 6.0; K += 0.25) {
    const double m = closed_form_modulus(RingSpec(1.0, ratio, K, 1.0));
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("angular j integrals") {
  const JIntegrals js = j_integrals(QuadratureSpec(8, 8, 8, 4));
  CHECK(std::abs(js.j1 - 3.0 * kPi2 / 8.0) <= 1e-12);
  CHECK(std::abs(js.j2 - 3.0 * kPi2 / 8.0) <= 1e-12);
  CHECK(std::abs(js.j3 - kPi2 / 4.0) <= 1e-12);
}

TEST_CASE("modulus assembly from j integrals") {
  const double j1 = 3.0 * kPi2 / 8.0, j2 = j1, j3 = kPi2 / 4.0;
  CHECK(near(assemble_modulus_from_j(1.0, 1.0, j1, j2, j3), kPi2, 1e-13));
  CHECK(near(assemble_modulus_from_j(2.0, 1.0, j1, j2, j3), 59.0 / 32.0 * kPi2, 1e-13));
  for (double K : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    for (double ratio : {1.5, kE, 4.0, 10.0}) {
      const RingSpec spec(1.0, ratio, K, 1.0);
      const double assembled =
          assemble_modulus_from_j(K, spec.log_ratio(), j1, j2, j3);
      const double closed = closed_form_modulus(spec);
      CHECK(std::abs(assembled - closed) <= 1e-14 * closed);
    }
  }
  CHECK_THROWS_AS(assemble_modulus_from_j(0.5, 1.0, j1, j2, j3), std::invalid_argument);
  CHECK_THROWS_AS(assemble_modulus_from_j(1.0, 0.0, j1, j2, j3), std::invalid_argument);
}

TEST_CASE("energy quadrature reproduces the closed form") {
  const QuadratureSpec q(8, 8, 8, 4);

  const RingSpec spherical(1.0, kE, 1.0, 1.0);
  const EnergyReport r1 = energy_quadrature(spherical, u0_field(spherical), q);
  CHECK(r1.relative_error <= 1e-6);
  CHECK(std::abs(r1.value - kPi2) <= 1e-6 * kPi2);
  CHECK(r1.node_count == 32l * 32l * 32l);

  const RingSpec stretched(1.0, kE, 2.0, 1.0);
  const EnergyReport r2 = energy_quadrature(stretched, u0_field(stretched), q);
  CHECK(std::abs(r2.value - 59.0 / 32.0 * kPi2) <= 1e-6 * kPi2);

  // refinement does not increase the error on this smooth integrand
  const EnergyReport fine =
      energy_quadrature(stretched, u0_field(stretched), QuadratureSpec(16, 16, 16, 4));
  CHECK(fine.relative_error <= r2.relative_error + 1e-15);
  CHECK(fine.relative_error <= 1e-9);
}

TEST_CASE("energy quadrature uses the cartesian gradient when no chart path exists") {
  const RingSpec spec(1.0, kE, 1.5, 1.0);
  ScalarField f = u0_field(spec);
  f.chart_gradient = nullptr;
  const EnergyReport rep = energy_quadrature(spec, f, QuadratureSpec(6, 6, 6, 4));
  CHECK(rep.relative_error <= 1e-6);
}

TEST_CASE("non-finite integrand aborts with the node location") {
  const RingSpec spec(1.0, 2.0, 1.0, 1.0);
  ScalarField bad;
  bad.chart_gradient = [](const EllipsoidalCoords&) {
    return HorizontalVector{std::numeric_limits<double>::infinity(), 0.0};
  };
  CHECK_THROWS_WITH_AS(energy_quadrature(spec, bad, QuadratureSpec(2, 2, 2, 2)),
                       doctest::Contains("non-finite integrand"), std::runtime_error);
}

TEST_CASE("boundary bump vanishes on both boundaries") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  const ScalarField bump = boundary_bump_field(spec, 7, 0.05);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> uphi(1e-3, M_PI - 1e-3);
  std::uniform_real_distribution<double> utheta(0.0, 2.0 * M_PI);
  for (int i = 0; i < 100; ++i) {
    const double phi = uphi(rng), theta = utheta(rng);
    CHECK(std::abs(bump.value(to_cartesian({spec.B, phi, theta}, spec.a, spec.b))) <= 1e-14);
    CHECK(std::abs(bump.value(to_cartesian({spec.A, phi, theta}, spec.a, spec.b))) <= 1e-13);
  }
}

TEST_CASE("bump gradient agrees with finite differences") {
  const RingSpec spec(1.0, kE, 2.0, 1.0);
  const ScalarField bump = boundary_bump_field(spec, 3, 0.05);
  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    const EllipsoidalCoords c = testing::random_interior_coords(rng, spec.B, spec.A, 0.1);
    const Point p = to_cartesian(c, spec.a, spec.b);
    const HorizontalVector g = bump.horizontal_gradient(p);
    const HorizontalVector fd = horizontal_fd_gradient(bump, p, 1e-4);
    CHECK(near(g.cx, fd.cx, 1e-7));
    CHECK(near(g.cy, fd.cy, 1e-7));
    const HorizontalVector gc = bump.chart_gradient(c);
    CHECK(near(g.cx, gc.cx, 1e-12));
    CHECK(near(g.cy, gc.cy, 1e-12));
  }
}

TEST_CASE("u0 minimises the energy under boundary-preserving bumps") {
  const QuadratureSpec q(8, 8, 8, 4);
  for (double K : {1.0, 2.0}) {
    const RingSpec spec(1.0, kE, K, 1.0);
    const double closed = closed_form_modulus(spec);
    const auto [base, zero_bumped] = perturbation_extremality(spec, 5, 0.0, q);
    CHECK(near(base, zero_bumped, 1e-12));
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
      const auto [e0, e1] = perturbation_extremality(spec, seed, 0.05, q);
      CHECK(std::abs(e0 - closed) <= 1e-6 * closed);
      CHECK(e1 >= closed - 1e-8);
      CHECK(e1 > e0);  // the affine profile never perturbs tangentially to zero
    }
  }
}
