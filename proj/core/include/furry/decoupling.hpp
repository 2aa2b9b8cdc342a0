#pragma once

#include <vector>

#include "furry/dirac.hpp"
#include "furry/series.hpp"

namespace furry {

// Circle used for the Riesz integral of the positive spectral projector.
struct ContourSpec {
  Complex center;
  double radius = 0.0;
  int m_nodes = 64;
};

// Circle around [g, lambda_max] (g = smallest positive eigenvalue of the free
// operator) widened by `margin`. Validated against the spectrum.
ContourSpec make_contour(const RVector& free_eigenvalues, double margin, int m_nodes);

// Throws InvalidArgument unless the circle encloses every positive and no
// negative eigenvalue and m_nodes is even and >= 16.
void validate_contour(const ContourSpec& c, const RVector& free_eigenvalues);

// P^(n) = (1/2 pi i) \oint (z - D_0)^{-1} (V (z - D_0)^{-1})^n dz by the
// trapezoidal rule. The rule is rerun with 2 m_nodes; a change above
// `convergence_tol` in any coefficient raises NumericalError.
MatrixSeries riesz_projection_series(const CMatrix& d0, const CMatrix& v, const ContourSpec& contour, int order,
                                     double convergence_tol = 1e-8);
MatrixSeries riesz_projection_series(const OneParticleSystem& sys, const ContourSpec& contour, int order,
                                     double convergence_tol = 1e-8);

// Same coefficients from the order-by-order conditions [D(gamma), P] = 0 and
// P^2 = P, solved in the eigenbasis of D_0. No quadrature, so it also works
// when the free spectrum is too wide for any practical contour.
MatrixSeries projection_series(const CMatrix& d0, const CMatrix& v, int order);
// Uses the Foldy-Wouthuysen matrix as the free eigenbasis.
MatrixSeries projection_series(const OneParticleSystem& sys, int order);

// (P0 P + Q0 (1 - P)) (1 - (P0 - P)^2)^{-1/2} as a series.
MatrixSeries u_gamma_series(const MatrixSeries& p_series, const CMatrix& p0);

// U_FW U P (D_0 + gamma V) P U* U_FW*
MatrixSeries h_diag_series(const CMatrix& d0, const CMatrix& v, const CMatrix& u_fw, const MatrixSeries& p_series,
                           const MatrixSeries& u_series);

// Exact counterpart of h_diag_series at the system's coupling.
CMatrix exact_h_diag(const OneParticleSystem& sys);

struct DecouplingBundle {
  MatrixSeries p_series;
  MatrixSeries u_series;
  MatrixSeries h_diag_series;
  CMatrix weight_neg_half;  // |D_0|^{-1/2}
};

// The bundle depends only on the free operator and V, not on gamma.
DecouplingBundle build_decoupling_bundle(const OneParticleSystem& sys, int order);

// || W (exact - sum_{n<=k} gamma^n S_n) W ||_2
double remainder_weighted_norm(const CMatrix& exact, const MatrixSeries& series, int k, double gamma,
                               const CMatrix& weight);

// ||(a + i)^{-1} - (b + i)^{-1}||_2
double resolvent_distance(const CMatrix& a, const CMatrix& b);

// || |D_0|^{1/2} U_gamma |D_0|^{-1/2} ||_2
double weighted_unitary_norm(const OneParticleSystem& sys);

struct GeometricFit {
  int k0 = -1;          // first index from which the sequence decreases
  double ratio = 0.0;   // fitted per-step ratio over points above the floor
  int points = 0;       // number of points used in the fit
};

// Values at or below `floor` count as converged: pairs of such values are
// not required to decrease, and they are left out of the ratio fit.
GeometricFit fit_geometric(const std::vector<double>& values, double floor);

}  // namespace furry
