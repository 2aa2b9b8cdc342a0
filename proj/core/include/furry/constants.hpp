#pragma once

namespace furry {

// Largest coupling for which the discretized operators are assembled.
inline constexpr double kMaxCoupling = 0.86602540378443864676;  // sqrt(3)/2
// Coupling below which the weighted decoupled operator is analytic.
inline constexpr double kCriticalCoupling = 0.3775;
// Coupling below which the decoupling unitary is analytic and unitary.
inline constexpr double kUnitarityLimit = 0.6841;

double c_gamma(double gamma);
// Constant in |D_gamma|^2 >= d_gamma^2 |D_0|^2.
double d_gamma(double gamma);

// Dirac-Coulomb bound state energy for principal quantum number n_pr.
double sommerfeld_energy(double gamma, int n_pr, int kappa);

}  // namespace furry
