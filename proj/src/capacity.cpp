#include "heisring/capacity.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace heisring {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;

// Deterministic uniform draw in [-1, 1] independent of the standard library's
// distribution implementation.
double draw_unit(std::mt19937_64& rng) {
  return 2.0 * ((rng() >> 11) * 0x1p-53) - 1.0;
}

struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    const double y = x - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
};

HorizontalVector field_gradient_at(const ScalarField& f, const EllipsoidalCoords& c,
                                   double a, double b) {
  if (f.chart_gradient) return f.chart_gradient(c);
  return f.horizontal_gradient(to_cartesian(c, a, b));
}

}  // namespace

double closed_form_modulus(const RingSpec& spec) {
  const double K = spec.distortion();
  const double lr = spec.log_ratio();
  return (0.375 * (K * K + 1.0 / (K * K)) + 0.25) * kPi * kPi / (lr * lr * lr);
}

EnergyReport energy_quadrature(const RingSpec& spec, const ScalarField& f,
                               const QuadratureSpec& q) {
  const PanelRule rr = composite_gauss(spec.B, spec.A, q.n_r, q.nodes_per_panel, true);
  const PanelRule rp = composite_gauss(0.0, kPi, q.n_phi, q.nodes_per_panel);
  const PanelRule rt = composite_gauss(0.0, 2.0 * kPi, q.n_theta, q.nodes_per_panel);
  const double ab2 = spec.a * spec.a * spec.b * spec.b;

  KahanSum total;
  for (size_t i = 0; i < rr.nodes.size(); ++i) {
    const double r = rr.nodes[i];
    const double jac = ab2 * r * r * r;
    KahanSum slice;
    for (size_t j = 0; j < rp.nodes.size(); ++j) {
      for (size_t k = 0; k < rt.nodes.size(); ++k) {
        const EllipsoidalCoords c{r, rp.nodes[j], rt.nodes[k]};
        const HorizontalVector g = field_gradient_at(f, c, spec.a, spec.b);
        const double g2 = g.cx * g.cx + g.cy * g.cy;
        const double sample = g2 * g2 * jac;
        if (!std::isfinite(sample)) {
          std::ostringstream msg;
          msg << "energy_quadrature: non-finite integrand at (r=" << r
              << ", phi=" << rp.nodes[j] << ", theta=" << rt.nodes[k] << ")";
          throw std::runtime_error(msg.str());
        }
        slice.add(sample * rp.weights[j] * rt.weights[k]);
      }
    }
    total.add(slice.sum * rr.weights[i]);
  }

  EnergyReport report;
  report.value = total.sum;
  report.closed_form = closed_form_modulus(spec);
  report.relative_error = std::abs(report.value - report.closed_form) / report.closed_form;
  report.node_count = q.node_count_3d();
  return report;
}

JIntegrals j_integrals(const QuadratureSpec& resolution) {
  const PanelRule rp = composite_gauss(0.0, kPi, resolution.n_phi, resolution.nodes_per_panel);
  const PanelRule rt =
      composite_gauss(0.0, 2.0 * kPi, resolution.n_theta, resolution.nodes_per_panel);
  KahanSum j1, j2, j3;
  for (size_t j = 0; j < rp.nodes.size(); ++j) {
    const double s2 = std::sin(rp.nodes[j]) * std::sin(rp.nodes[j]);
    for (size_t k = 0; k < rt.nodes.size(); ++k) {
      const double w = rp.weights[j] * rt.weights[k];
      const double sn = std::sin(rp.nodes[j] + rt.nodes[k]);
      const double cn = std::cos(rp.nodes[j] + rt.nodes[k]);
      j1.add(w * s2 * sn * sn * sn * sn);
      j2.add(w * s2 * cn * cn * cn * cn);
      j3.add(w * 2.0 * s2 * sn * sn * cn * cn);
    }
  }
  return {j1.sum, j2.sum, j3.sum};
}

double assemble_modulus_from_j(double K, double log_ratio, double j1, double j2,
                               double j3) {
  if (!(K >= 1.0))
    throw std::invalid_argument("assemble_modulus_from_j: requires K >= 1");
  if (!(log_ratio > 0.0))
    throw std::invalid_argument("assemble_modulus_from_j: requires log_ratio > 0");
  return (K * K * j1 + j2 / (K * K) + j3) / (log_ratio * log_ratio * log_ratio);
}

ScalarField boundary_bump_field(const RingSpec& spec, std::uint64_t seed,
                                double amplitude) {
  std::mt19937_64 rng(seed);
  const double c0 = draw_unit(rng);
  const double c1 = draw_unit(rng);
  const double c2 = draw_unit(rng);
  const double c3 = draw_unit(rng);
  // Scales keep the affine profile O(1) across the ring.
  const double sx = 1.0 / (spec.a * spec.A);
  const double sy = 1.0 / (spec.b * spec.A);
  const double st = 1.0 / (spec.a * spec.b * spec.A * spec.A);
  const double logR = spec.log_ratio();
  const double B = spec.B;
  const RingSpec rs = spec;
  const double amp = amplitude;

  auto radial = [B, logR](double r) { return std::sin(kPi * std::log(r / B) / logR); };
  auto radial_deriv = [B, logR](double r) {
    return (kPi / (r * logR)) * std::cos(kPi * std::log(r / B) / logR);
  };
  auto profile = [=](const Point& p) {
    return c0 + c1 * p.x * sx + c2 * p.y * sy + c3 * p.t * st;
  };
  // Gradient assembled in Cartesian form: X v = S'(r) Xr P + S XP with
  // Xr = Xq / (4 r^3) and q the defining quartic; no chart inversion involved,
  // so the formula is regular on the t-axis as well.
  auto gradient_at = [=](const Point& p, double r) {
    const double xa = p.x / rs.a, yb = p.y / rs.b;
    const double rho2 = xa * xa + yb * yb;
    const double ab2 = rs.a * rs.a * rs.b * rs.b;
    const double Xq = 4.0 * p.x * rho2 / (rs.a * rs.a) + 4.0 * p.y * p.t / ab2;
    const double Yq = 4.0 * p.y * rho2 / (rs.b * rs.b) - 4.0 * p.x * p.t / ab2;
    const double r3 = r * r * r;
    const double Xr = Xq / (4.0 * r3);
    const double Yr = Yq / (4.0 * r3);
    const double XP = c1 * sx + 2.0 * p.y * c3 * st;
    const double YP = c2 * sy - 2.0 * p.x * c3 * st;
    const double S = radial(r);
    const double dS = radial_deriv(r);
    const double P = profile(p);
    return HorizontalVector{amp * (dS * Xr * P + S * XP), amp * (dS * Yr * P + S * YP)};
  };

  ScalarField f;
  f.value = [=](const Point& p) {
    const double q = rs.gauge4(p);
    if (q <= 0.0) throw std::domain_error("boundary_bump_field: undefined at the origin");
    return amp * radial(std::pow(q, 0.25)) * profile(p);
  };
  f.horizontal_gradient = [=](const Point& p) {
    const double q = rs.gauge4(p);
    if (q <= 0.0) throw std::domain_error("boundary_bump_field: undefined at the origin");
    return gradient_at(p, std::pow(q, 0.25));
  };
  f.domain = [rs](const Point& p) { return rs.gauge4(p) > 0.0; };
  f.chart_gradient = [=](const EllipsoidalCoords& c) {
    return gradient_at(to_cartesian(c, rs.a, rs.b), c.r);
  };
  return f;
}

std::pair<double, double> perturbation_extremality(const RingSpec& spec,
                                                   std::uint64_t bump_seed,
                                                   double amplitude,
                                                   const QuadratureSpec& q) {
  const ScalarField base = u0_field(spec);
  const ScalarField bump = boundary_bump_field(spec, bump_seed, amplitude);

  // The radial profile vanishes on both boundaries by construction; verify on
  // a sample before trusting the admissibility argument.
  const double tol = 1e-10 * (1.0 + std::abs(amplitude));
  for (int i = 0; i < 8; ++i) {
    const double phi = kPi * (i + 0.5) / 8.0;
    const double theta = 2.0 * kPi * i / 8.0;
    for (double r : {spec.B, spec.A}) {
      const Point p = to_cartesian({r, phi, theta}, spec.a, spec.b);
      if (std::abs(bump.value(p)) > tol)
        throw std::invalid_argument(
            "perturbation_extremality: bump violates boundary conditions");
    }
  }

  ScalarField perturbed;
  perturbed.value = [base, bump](const Point& p) {
    return base.value(p) + bump.value(p);
  };
  perturbed.horizontal_gradient = [base, bump](const Point& p) {
    const HorizontalVector g = base.horizontal_gradient(p);
    const HorizontalVector h = bump.horizontal_gradient(p);
    return HorizontalVector{g.cx + h.cx, g.cy + h.cy};
  };
  perturbed.domain = base.domain;
  perturbed.chart_gradient = [base, bump](const EllipsoidalCoords& c) {
    const HorizontalVector g = base.chart_gradient(c);
    const HorizontalVector h = bump.chart_gradient(c);
    return HorizontalVector{g.cx + h.cx, g.cy + h.cy};
  };

  const double e0 = energy_quadrature(spec, base, q).value;
  const double e1 = energy_quadrature(spec, perturbed, q).value;
  return {e0, e1};
}

}  // namespace heisring
