#include "furry/grid.hpp"

#include <cmath>
#include <sstream>

#include "furry/error.hpp"
#include "furry/special.hpp"

namespace furry {

int orbital_l(int kappa) {
  if (kappa == 0) throw InvalidArgument("kappa must be nonzero");
  return kappa > 0 ? kappa : -kappa - 1;
}

ChannelGrid build_channel_grid(int kappa, int n, double map_scale) {
  if (kappa == 0) throw InvalidArgument("build_channel_grid: kappa must be nonzero");
  if (n < 8) {
    std::ostringstream os;
    os << "build_channel_grid: need at least 8 nodes, got " << n;
    throw InvalidArgument(os.str());
  }
  if (!(map_scale > 0.0) || !std::isfinite(map_scale))
    throw InvalidArgument("build_channel_grid: map_scale must be positive and finite");
  auto [x, w] = gauss_legendre(n);
  ChannelGrid g;
  g.kappa = kappa;
  g.map_scale = map_scale;
  g.nodes.resize(n);
  g.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = 0.5 * (x(i) + 1.0);
    const double omt = 0.5 * (1.0 - x(i));
    g.nodes(i) = map_scale * t / omt;
    g.weights(i) = 0.5 * w(i) * map_scale / (omt * omt);
  }
  return g;
}

}  // namespace furry
