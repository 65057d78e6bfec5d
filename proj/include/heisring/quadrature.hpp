#pragma once

#include <vector>

namespace heisring {

// Tensor-product composite Gauss-Legendre resolution: panel counts per
// coordinate and the Gauss order used on every panel.
struct QuadratureSpec {
  int n_r = 8;
  int n_phi = 8;
  int n_theta = 8;
  int nodes_per_panel = 4;

  QuadratureSpec() = default;
  QuadratureSpec(int nr, int nphi, int ntheta, int nodes);

  long node_count_3d() const;
};

// Nodes and matching weights of a 1D rule.
struct PanelRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre rule of order n on [-1, 1].
PanelRule gauss_legendre(int n);

// Composite rule over [lo, hi]: `panels` panels with an order-`nodes` Gauss
// rule each. Geometric spacing places panel edges in geometric progression,
// which resolves integrands with 1/r-type radial profiles uniformly well;
// it requires 0 < lo < hi.
PanelRule composite_gauss(double lo, double hi, int panels, int nodes,
                          bool geometric = false);

}  // namespace heisring
