#pragma once

#include "furry/grid.hpp"
#include "furry/linalg.hpp"

namespace furry {

struct Tolerances {
  // Allowed shortfall of the discrete gap below sqrt(1 - gamma^2).
  double tol_gap = 1e-3;
  // Slack for operator inequalities that hold exactly only in the continuum.
  double tol_diag = 1e-4;
  // Eigenvalues closer than this to zero make the sign projector undefined.
  double zero_gap = 1e-8;
};

// Matrices use interleaved indexing: row 2i is the upper radial component at
// node i, row 2i+1 the lower one.

// Partial-wave Coulomb kernel -1/r for orbital momentum l in the symmetrized
// variables c_i = sqrt(w_i) p_i phi(p_i), with Lande subtraction of the
// logarithmic diagonal singularity.
RMatrix coulomb_kernel(const ChannelGrid& grid, int l);

// sqrt(1 + p_i^2)
RVector free_energies(const ChannelGrid& grid);

CMatrix build_free_dirac(const ChannelGrid& grid);
CMatrix build_coulomb(const ChannelGrid& grid);
CMatrix foldy_wouthuysen(const ChannelGrid& grid);
// |D_0|^s; diagonal since every node block squares to (1 + p^2) I.
CMatrix abs_free_dirac_power(const ChannelGrid& grid, double s);
CMatrix free_positive_projector(const ChannelGrid& grid);
// diag(1, 0, 1, 0, ...) of side 2n.
CMatrix beta_plus(Index n_nodes);

struct OneParticleSystem {
  ChannelGrid grid;
  double gamma = 0.0;
  CMatrix d0, v, dgamma;
  CMatrix abs_d0_half, abs_d0_neg_half;
  CMatrix p_plus_0, p_plus_gamma;
  CMatrix u_fw, u_gamma;
  RVector eigenvalues;   // of dgamma, ascending
  CMatrix eigenvectors;  // columns match eigenvalues
  Index first_positive = 0;
  double gap = 0.0;
  double projector_distance = 0.0;  // ||P_+^0 - P_+^gamma||_2

  Index dim() const { return d0.rows(); }
  Index positive_count() const { return eigenvalues.size() - first_positive; }
  CMatrix p_minus_0() const { return CMatrix::Identity(dim(), dim()) - p_plus_0; }
  CMatrix p_minus_gamma() const { return CMatrix::Identity(dim(), dim()) - p_plus_gamma; }
};

OneParticleSystem assemble_system(const ChannelGrid& grid, double gamma, const Tolerances& tol = {});
// Same with caller-supplied D_0 and V (both on the grid's index layout).
OneParticleSystem assemble_system(const ChannelGrid& grid, const CMatrix& d0, const CMatrix& v, double gamma,
                                  const Tolerances& tol = {});

// (P0 Pg + Q0 Qg)(1 - (P0 - Pg)^2)^{-1/2}. Throws NumericalError when
// ||P0 - Pg||_2 >= 1.
CMatrix exact_u_gamma(const CMatrix& p0, const CMatrix& pg);

// lambda_min((pi/2)|D_0| + V)
double check_kato(const OneParticleSystem& sys);
// lambda_min(D_gamma^2 - d_gamma^2 D_0^2)
double check_dgamma_bound(const OneParticleSystem& sys);

// Eigenvalues of p^2/2 + gamma V_l (momentum-space Schroedinger operator),
// ascending.
RVector nonrelativistic_levels(const ChannelGrid& grid, int l, double gamma);

}  // namespace furry
