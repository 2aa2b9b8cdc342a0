#include "furry/dirac.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "furry/constants.hpp"
#include "furry/error.hpp"
#include "furry/special.hpp"

namespace furry {

RMatrix coulomb_kernel(const ChannelGrid& grid, int l) {
  const Index n = grid.size();
  const RVector& p = grid.nodes;
  const RVector& w = grid.weights;
  const double inv_pi = 1.0 / std::numbers::pi;
  RMatrix m(n, n);
  RVector lande = RVector::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double pq2 = 2.0 * p(i) * p(j);
      const double z = (p(i) * p(i) + p(j) * p(j)) / pq2;
      const double d = p(i) - p(j);
      const double zm1 = d * d / pq2;
      const double q = legendre_q(l, z, zm1);
      m(i, j) = m(j, i) = -inv_pi * std::sqrt(w(i) * w(j)) * q;
      const double q0 = l == 0 ? q : legendre_q(0, z, zm1);
      lande(i) += w(j) * (p(i) / p(j)) * q0;
      lande(j) += w(i) * (p(j) / p(i)) * q0;
    }
  }
  const double half_pi2 = 0.5 * std::numbers::pi * std::numbers::pi;
  for (Index i = 0; i < n; ++i) m(i, i) = -inv_pi * (p(i) * half_pi2 - lande(i));
  return m;
}

RVector free_energies(const ChannelGrid& grid) {
  return (1.0 + grid.nodes.array().square()).sqrt().matrix();
}

CMatrix build_free_dirac(const ChannelGrid& grid) {
  const Index n = grid.size();
  CMatrix d = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    d(2 * i, 2 * i) = 1.0;
    d(2 * i + 1, 2 * i + 1) = -1.0;
    d(2 * i, 2 * i + 1) = d(2 * i + 1, 2 * i) = grid.nodes(i);
  }
  return d;
}

CMatrix build_coulomb(const ChannelGrid& grid) {
  const Index n = grid.size();
  const RMatrix va = coulomb_kernel(grid, grid.l_upper());
  const RMatrix vb = coulomb_kernel(grid, grid.l_lower());
  CMatrix v = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      v(2 * i, 2 * j) = va(i, j);
      v(2 * i + 1, 2 * j + 1) = vb(i, j);
    }
  }
  return v;
}

CMatrix foldy_wouthuysen(const ChannelGrid& grid) {
  const Index n = grid.size();
  CMatrix u = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    const double theta = 0.5 * std::atan(grid.nodes(i));
    const double c = std::cos(theta), s = std::sin(theta);
    u(2 * i, 2 * i) = c;
    u(2 * i, 2 * i + 1) = s;
    u(2 * i + 1, 2 * i) = -s;
    u(2 * i + 1, 2 * i + 1) = c;
  }
  return u;
}

CMatrix abs_free_dirac_power(const ChannelGrid& grid, double s) {
  const RVector e = free_energies(grid);
  const Index n = grid.size();
  CMatrix d = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) d(2 * i, 2 * i) = d(2 * i + 1, 2 * i + 1) = std::pow(e(i), s);
  return d;
}

CMatrix free_positive_projector(const ChannelGrid& grid) {
  // Per node (I + D_p / E_p) / 2.
  const Index n = grid.size();
  CMatrix p = CMatrix::Zero(2 * n, 2 * n);
  for (Index i = 0; i < n; ++i) {
    const double pi = grid.nodes(i);
    const double e = std::sqrt(1.0 + pi * pi);
    p(2 * i, 2 * i) = 0.5 * (1.0 + 1.0 / e);
    p(2 * i + 1, 2 * i + 1) = 0.5 * (1.0 - 1.0 / e);
    p(2 * i, 2 * i + 1) = p(2 * i + 1, 2 * i) = 0.5 * pi / e;
  }
  return p;
}

CMatrix beta_plus(Index n_nodes) {
  CMatrix b = CMatrix::Zero(2 * n_nodes, 2 * n_nodes);
  for (Index i = 0; i < n_nodes; ++i) b(2 * i, 2 * i) = 1.0;
  return b;
}

OneParticleSystem assemble_system(const ChannelGrid& grid, double gamma, const Tolerances& tol) {
  return assemble_system(grid, build_free_dirac(grid), build_coulomb(grid), gamma, tol);
}

OneParticleSystem assemble_system(const ChannelGrid& grid, const CMatrix& d0, const CMatrix& v, double gamma,
                                  const Tolerances& tol) {
  if (!(gamma >= 0.0 && gamma < kMaxCoupling)) {
    std::ostringstream os;
    os << "assemble_system: gamma = " << gamma << " outside [0, sqrt(3)/2)";
    throw InvalidArgument(os.str());
  }
  const Index dim = 2 * grid.size();
  if (d0.rows() != dim || d0.cols() != dim || v.rows() != dim || v.cols() != dim)
    throw InvalidArgument("assemble_system: operator size does not match grid");

  OneParticleSystem s;
  s.grid = grid;
  s.gamma = gamma;
  s.d0 = d0;
  s.v = v;
  s.dgamma = d0 + gamma * v;
  s.abs_d0_half = abs_free_dirac_power(grid, 0.5);
  s.abs_d0_neg_half = abs_free_dirac_power(grid, -0.5);
  s.p_plus_0 = free_positive_projector(grid);
  s.u_fw = foldy_wouthuysen(grid);

  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(s.dgamma));
  if (es.info() != Eigen::Success) throw NumericalError("assemble_system: eigensolver failed");
  s.eigenvalues = es.eigenvalues();
  s.eigenvectors = es.eigenvectors();
  s.gap = s.eigenvalues.cwiseAbs().minCoeff();
  if (s.gap < tol.zero_gap) {
    std::ostringstream os;
    os << "no spectral gap: eigenvalue " << s.gap << " within " << tol.zero_gap << " of zero at gamma = " << gamma;
    throw NumericalError(os.str());
  }
  const double bound = std::sqrt(1.0 - gamma * gamma);
  if (s.gap < bound - tol.tol_gap) {
    std::ostringstream os;
    os << "spectral gap " << s.gap << " below sqrt(1 - gamma^2) = " << bound << " by more than tol_gap = "
       << tol.tol_gap << " (grid under-resolved?)";
    throw NumericalError(os.str());
  }
  s.first_positive = 0;
  while (s.first_positive < dim && s.eigenvalues(s.first_positive) < 0.0) ++s.first_positive;
  const Index npos = dim - s.first_positive;
  const auto q = s.eigenvectors.rightCols(npos);
  s.p_plus_gamma = q * q.adjoint();

  s.projector_distance = spectral_norm(s.p_plus_0 - s.p_plus_gamma);
  s.u_gamma = exact_u_gamma(s.p_plus_0, s.p_plus_gamma);
  return s;
}

CMatrix exact_u_gamma(const CMatrix& p0, const CMatrix& pg) {
  if (p0.rows() != pg.rows() || p0.cols() != pg.cols() || p0.rows() != p0.cols())
    throw InvalidArgument("exact_u_gamma: projectors must be square of equal size");
  const Index d = p0.rows();
  const CMatrix id = CMatrix::Identity(d, d);
  const CMatrix diff = hermitian_part(p0 - pg);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(diff);
  if (es.info() != Eigen::Success) throw NumericalError("exact_u_gamma: eigensolver failed");
  const double dist = es.eigenvalues().cwiseAbs().maxCoeff();
  if (!(dist < 1.0)) {
    std::ostringstream os;
    os << "exact_u_gamma: projectors too far apart, ||P0 - Pg|| = " << dist;
    throw NumericalError(os.str());
  }
  // 1 - (P0 - Pg)^2 shares eigenvectors with P0 - Pg.
  const RVector f = (1.0 - es.eigenvalues().array().square()).rsqrt().matrix();
  const CMatrix& v = es.eigenvectors();
  const CMatrix inv_sqrt = v * f.cast<Complex>().asDiagonal() * v.adjoint();
  const CMatrix a = p0 * pg + (id - p0) * (id - pg);
  return a * inv_sqrt;
}

double check_kato(const OneParticleSystem& sys) {
  const CMatrix abs_d0 = abs_free_dirac_power(sys.grid, 1.0);
  return min_eigenvalue(0.5 * std::numbers::pi * abs_d0 + sys.v);
}

double check_dgamma_bound(const OneParticleSystem& sys) {
  const double d = d_gamma(sys.gamma);
  const CMatrix a = sys.dgamma * sys.dgamma - (d * d) * (sys.d0 * sys.d0);
  return min_eigenvalue(a);
}

RVector nonrelativistic_levels(const ChannelGrid& grid, int l, double gamma) {
  RMatrix h = gamma * coulomb_kernel(grid, l);
  h.diagonal() += 0.5 * grid.nodes.array().square().matrix();
  Eigen::SelfAdjointEigenSolver<RMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

}  // namespace furry
