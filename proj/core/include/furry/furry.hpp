#pragma once

#include <memory>
#include <string>
#include <vector>

#include "furry/decoupling.hpp"
#include "furry/dirac.hpp"
#include "furry/pair_interaction.hpp"
#include "furry/report.hpp"
#include "furry/series.hpp"

namespace furry {

struct FurryConfig {
  int n_particles = 2;
  double z_charge = 2.0;
  int n_plus = 20;
  bool antisymmetrize = false;
  long long dimension_cap = 20000;
};

// N-particle Furry operator on the span of the lowest n_plus positive
// one-particle states per particle.
//
// The decoupled frame uses the fixed basis B = U_FW U_gamma Phi, where Phi
// holds the retained eigenvectors of D_gamma. Exact and series operators are
// both expressed in B, so restriction and conjugation commute.
struct FurrySystem {
  OneParticleSystem one_particle;
  FurryConfig config;
  std::shared_ptr<const PairInteraction> pair;

  CMatrix furry_basis;  // Phi, 2n x n_plus
  RVector energies;     // retained eigenvalues of D_gamma
  CMatrix fw_basis;     // B
  CMatrix w_matrix;     // W on Phi x Phi, n_plus^2 x n_plus^2
  double interaction_scale = 0.0;  // gamma / Z

  CMatrix antisym;          // isometry onto the alternating subspace; empty when off
  CMatrix kinetic;          // sum_j eps_j
  CMatrix interaction;      // (gamma/Z) sum_{i<j} W_ij
  CMatrix h_furry_exact;    // kinetic + interaction
  CMatrix h_diag_exact;     // same operator through the decoupled frame
  CMatrix free_projected;   // Phi_N^* (sum_j |D_0|_j) Phi_N
  CMatrix d0_sum_half_neg;  // (B_N^* D_sum^{-1} B_N)^{1/2}
  MatrixSeries h_diag_series_N;
  std::vector<std::string> warnings;

  Index dim() const { return h_furry_exact.rows(); }
  double gamma() const { return one_particle.gamma; }
};

// With basis_size left at zero the basis shrinks from the default until the
// round trips pass on this grid.
std::shared_ptr<const PairInteraction> build_pair_interaction(const ChannelGrid& grid,
                                                              const PairInteractionOptions& opts = {});

// Dimension of the working space (tensor or alternating).
long long furry_dimension(const FurryConfig& cfg);

// Pair operator W (on slots i, j) lifted into an n-fold tensor space with
// d states per slot.
CMatrix lift_pair(const CMatrix& w, int i, int j, int n_slots, Index d);

// Columns are orthonormal alternating tensors, one per increasing index tuple.
CMatrix antisymmetrizer(Index d, int n_slots);

// Swap of two slots on the d^2-dimensional pair space.
CMatrix swap_operator(Index d);

// Exact operators; h_diag_series_N is left empty.
FurrySystem assemble_furry_exact(const OneParticleSystem& sys, const FurryConfig& cfg,
                                 std::shared_ptr<const PairInteraction> w);

// Series of the decoupled N-particle operator in the system's frame. The
// interaction enters one order up because of its gamma/Z prefactor.
MatrixSeries assemble_h_diag_series_N(const DecouplingBundle& bundle, FurrySystem& fs);

FurrySystem build_furry_system(const OneParticleSystem& sys, const DecouplingBundle& bundle, const FurryConfig& cfg,
                               std::shared_ptr<const PairInteraction> w);

// Same retained operator assembled directly in the (2n)^N tensor space
// (conjugate first, restrict afterwards). Small grids only.
CMatrix h_diag_full_space(const FurrySystem& fs);

// lambda_max(T^{-1/2} W T^{-1/2}) with T the kinetic part.
double check_form_bound(const FurrySystem& fs);
// gamma pi N (N - 1) / (4 Z d_gamma)
double form_bound_constant(const FurrySystem& fs);

// lambda_max(H^{-1/2} (sum_j |D_0|_j) H^{-1/2})
double check_kinetic_weight_bound(const FurrySystem& fs);

// Resolvent distances below this are roundoff.
inline constexpr double kDistanceFloor = 1e-11;

// One FurrySystem per coupling; rows for k = 0..k_max.
ConvergenceReport converge_main_theorem(const std::vector<const FurrySystem*>& systems, int k_max);

// Lowest eigenvalues (ascending) of the Hermitian part.
RVector lowest_eigenvalues(const CMatrix& h, Index count);

}  // namespace furry
