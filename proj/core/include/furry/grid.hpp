#pragma once

#include "furry/linalg.hpp"

namespace furry {

// Orbital angular momentum of the upper radial component for kappa.
// The lower component uses orbital_l(-kappa).
int orbital_l(int kappa);

struct ChannelGrid {
  int kappa = -1;
  double map_scale = 1.0;
  RVector nodes;    // momenta p_i, strictly increasing
  RVector weights;  // quadrature weights on (0, inf)

  Index size() const { return nodes.size(); }
  int l_upper() const { return orbital_l(kappa); }
  int l_lower() const { return orbital_l(-kappa); }
};

// Gauss-Legendre on (0,1) mapped by p = s t / (1 - t).
ChannelGrid build_channel_grid(int kappa, int n, double map_scale);

}  // namespace furry
