#include "furry/constants.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "furry/error.hpp"

namespace furry {
namespace {

void check_coupling(double gamma, const char* who) {
  if (!(gamma >= 0.0 && gamma < kMaxCoupling)) {
    std::ostringstream os;
    os << who << ": gamma = " << gamma << " outside [0, sqrt(3)/2)";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

double c_gamma(double gamma) {
  check_coupling(gamma, "c_gamma");
  return (std::sqrt(4.0 * gamma * gamma + 9.0) - 4.0 * gamma) / 3.0;
}

double d_gamma(double gamma) {
  check_coupling(gamma, "d_gamma");
  const double c = c_gamma(gamma);
  const double c2 = c * c;
  return 0.5 * (1.0 + c2 - std::sqrt((1.0 - c2) * (1.0 - c2) + 4.0 * gamma * gamma * c2));
}

double sommerfeld_energy(double gamma, int n_pr, int kappa) {
  if (kappa == 0) throw InvalidArgument("sommerfeld_energy: kappa must be nonzero");
  const int ak = std::abs(kappa);
  if (!(gamma >= 0.0) || gamma >= ak) throw InvalidArgument("sommerfeld_energy: need 0 <= gamma < |kappa|");
  if (n_pr < ak) throw InvalidArgument("sommerfeld_energy: need n_pr >= |kappa|");
  const double denom = n_pr - ak + std::sqrt(static_cast<double>(kappa) * kappa - gamma * gamma);
  const double r = gamma / denom;
  return 1.0 / std::sqrt(1.0 + r * r);
}

}  // namespace furry
