#pragma once

#include <utility>

#include "furry/linalg.hpp"

namespace furry {

// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
std::pair<RVector, RVector> gauss_legendre(int n);

// Gauss rule for the weight x^alpha e^{-x} on (0, inf). With `scaled` the
// weights are returned multiplied by e^{x_i}.
std::pair<RVector, RVector> gauss_laguerre(int n, double alpha, bool scaled = false);

// Legendre function of the second kind Q_l(z) for z > 1. `zm1` is z - 1
// supplied separately so nearly coincident momenta keep full precision.
double legendre_q(int l, double z, double zm1);

// Legendre polynomials P_0..P_m at x.
RVector legendre_p_all(int m, double x);

// Gegenbauer polynomial C_k^{(a)}(x).
double gegenbauer(int k, double a, double x);

// e^{-x/2} L_k^{(alpha)}(x) for k = 0..m, by a recurrence that stays finite
// for large x.
RVector laguerre_scaled_all(int m, double alpha, double x);

}  // namespace furry
