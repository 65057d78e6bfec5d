#include "heisring/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace heisring {

QuadratureSpec::QuadratureSpec(int nr, int nphi, int ntheta, int nodes)
    : n_r(nr), n_phi(nphi), n_theta(ntheta), nodes_per_panel(nodes) {
  if (n_r < 1 || n_phi < 1 || n_theta < 1)
    throw std::invalid_argument("QuadratureSpec: panel counts must be positive");
  if (nodes_per_panel < 2)
    throw std::invalid_argument("QuadratureSpec: nodes_per_panel must be >= 2");
}

long QuadratureSpec::node_count_3d() const {
  const long n = nodes_per_panel;
  return n * n_r * n * n_phi * n * n_theta;
}

PanelRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: order must be positive");
  PanelRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) {
        // one polishing pass
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
          const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
          p0 = p1;
          p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        x -= p1 / dp;
        break;
      }
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

PanelRule composite_gauss(double lo, double hi, int panels, int nodes, bool geometric) {
  if (!(hi > lo)) throw std::invalid_argument("composite_gauss: requires lo < hi");
  if (geometric && !(lo > 0.0))
    throw std::invalid_argument("composite_gauss: geometric spacing requires lo > 0");
  const PanelRule base = gauss_legendre(nodes);
  PanelRule rule;
  rule.nodes.reserve(static_cast<size_t>(panels) * nodes);
  rule.weights.reserve(static_cast<size_t>(panels) * nodes);
  const double ratio = geometric ? std::pow(hi / lo, 1.0 / panels) : 0.0;
  double edge = lo;
  for (int p = 0; p < panels; ++p) {
    const double next =
        (p + 1 == panels) ? hi
                          : (geometric ? lo * std::pow(ratio, p + 1)
                                       : lo + (hi - lo) * (p + 1) / panels);
    const double mid = 0.5 * (edge + next);
    const double halfw = 0.5 * (next - edge);
    for (int i = 0; i < nodes; ++i) {
      rule.nodes.push_back(mid + halfw * base.nodes[i]);
      rule.weights.push_back(halfw * base.weights[i]);
    }
    edge = next;
  }
  return rule;
}

}  // namespace heisring
