#pragma once

#include "furry/grid.hpp"
#include "furry/linalg.hpp"

namespace furry {

// Zero means "derive from the grid".
struct PairInteractionOptions {
  double basis_scale = 0.0;   // Sturmian exponent lambda; default map_scale / 2
  int basis_size = 0;         // Sturmians per component; default min(64, n / 3)
  int radial_nodes = 0;       // default 6 * basis_size
  double radial_scale = 0.0;  // radial map r = s t / (1 - t); default basis_size / (4 lambda)
  double roundtrip_tol = 1e-6;
};

// Monopole part 1/max(r1, r2) of the electron-electron repulsion between
// one-particle states given on a momentum grid.
//
// Each spinor component is projected onto an orthonormal Coulomb-Sturmian
// basis of matching orbital momentum, whose momentum-space form is known in
// closed form. The basis is evaluated on a radial quadrature grid where the
// Slater integral is taken with a spectral integration matrix.
class PairInteraction {
 public:
  explicit PairInteraction(const ChannelGrid& grid, const PairInteractionOptions& opts = {});

  const ChannelGrid& grid() const { return grid_; }
  const RVector& radii() const { return r_; }
  const RVector& radial_weights() const { return wr_; }
  int basis_size() const { return ms_; }

  // ||X^T diag(w r^2) X - I||_max over both components.
  double radial_roundtrip_error() const { return radial_rt_; }
  // ||Pi Pi^T - I||_max over both components.
  double momentum_roundtrip_error() const { return momentum_rt_; }

  // Radial upper / lower components (rows = radial nodes) of one-particle
  // vectors in interleaved momentum layout.
  void radial_components(const CMatrix& vecs, CMatrix& upper, CMatrix& lower) const;

  // Per column: 1 - ||basis projection||^2, the part of a normalized state
  // the Sturmian basis misses.
  RVector capture_defect(const CMatrix& vecs) const;

  // rho_{ac}(r) = conj(G_a) G_c + conj(F_a) F_c, column a * n_c + c.
  static CMatrix pair_densities(const CMatrix& ga, const CMatrix& fa, const CMatrix& gc, const CMatrix& fc);

  // rho1^T K rho2 with K the Slater kernel including r^2 dr measures.
  CMatrix coulomb_form(const CMatrix& rho1, const CMatrix& rho2) const;
  const RMatrix& kernel() const { return kernel_; }

  // Reorder T[(a c),(b d)] into W[(a b),(c d)] for n states.
  static CMatrix pair_matrix_from_form(const CMatrix& t, Index n);

  // W_{ab,cd} = <a b| 1/r_> |c d> for the columns of `states`.
  CMatrix interaction_matrix(const CMatrix& states) const;

 private:
  struct Component {
    int l = 0;
    RMatrix proj;     // basis_size x n
    RMatrix values;   // radial nodes x basis_size
  };
  Component build_component(int l) const;

  ChannelGrid grid_;
  double lambda_ = 0.0;
  int ms_ = 0;
  RVector r_, wr_;
  RMatrix kernel_;
  Component upper_, lower_;
  double radial_rt_ = 0.0, momentum_rt_ = 0.0;
};

}  // namespace furry
