#include "furry/pair_interaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "furry/error.hpp"
#include "furry/special.hpp"

namespace furry {
namespace {

// Momentum-space form of the Sturmian (2 lambda r)^l e^{-lambda r} L_k^{(2l+1)}(2 lambda r)
// under sqrt(2/pi) int j_l(p r) f(r) r^2 dr.
double sturmian_momentum(int k, int l, double lambda, double p) {
  const double q = p / lambda;
  const double q2 = q * q;
  double fact = 1.0;
  for (int j = 2; j <= l; ++j) fact *= j;
  const double h = std::sqrt(2.0 / std::numbers::pi) * (k + l + 1) * std::ldexp(1.0, 2 * l + 1) * fact *
                   std::pow(q, l) / std::pow(q2 + 1.0, l + 2) * gegenbauer(k, l + 1.0, (q2 - 1.0) / (q2 + 1.0));
  return h / (lambda * lambda * lambda);
}

// S_kj = int_{-1}^{x_k} ell_j(x) dx for the Lagrange basis on Gauss-Legendre nodes.
RMatrix integration_matrix(const RVector& x, const RVector& w) {
  const Index m = x.size();
  RMatrix pk(m, m + 1), pj(m, m + 1);
  for (Index k = 0; k < m; ++k) pk.row(k) = legendre_p_all(static_cast<int>(m), x(k)).transpose();
  pj = pk;
  RMatrix s(m, m);
  for (Index j = 0; j < m; ++j) {
    for (Index k = 0; k < m; ++k) {
      double acc = 0.5 * (x(k) + 1.0);
      for (Index mm = 1; mm < m; ++mm) acc += pj(j, mm) * 0.5 * (pk(k, mm + 1) - pk(k, mm - 1));
      s(k, j) = w(j) * acc;
    }
  }
  return s;
}

}  // namespace

PairInteraction::PairInteraction(const ChannelGrid& grid, const PairInteractionOptions& opts) : grid_(grid) {
  const int n = static_cast<int>(grid.size());
  lambda_ = opts.basis_scale > 0.0 ? opts.basis_scale : 0.5 * grid.map_scale;
  ms_ = opts.basis_size > 0 ? opts.basis_size : std::clamp(n / 3, 4, 64);
  const int mr = opts.radial_nodes > 0 ? opts.radial_nodes : 6 * ms_;
  const double rs = opts.radial_scale > 0.0 ? opts.radial_scale : ms_ / (4.0 * lambda_);

  auto [x, wx] = gauss_legendre(mr);
  r_.resize(mr);
  wr_.resize(mr);
  RVector drdx(mr);
  for (int k = 0; k < mr; ++k) {
    const double t = 0.5 * (x(k) + 1.0);
    const double omt = 0.5 * (1.0 - x(k));
    r_(k) = rs * t / omt;
    drdx(k) = 0.5 * rs / (omt * omt);
    wr_(k) = wx(k) * drdx(k);
  }

  // int int g1(r1) g2(r2) / max(r1, r2) with g = rho r^2:
  // sum_k w_k g1_k [ (1/r_k) int_0^{r_k} g2 + int_{r_k}^inf g2(s)/s ds ].
  const RMatrix a = integration_matrix(x, wx) * drdx.asDiagonal();
  RMatrix y(mr, mr);
  for (int k = 0; k < mr; ++k)
    for (int j = 0; j < mr; ++j) y(k, j) = a(k, j) / r_(k) + (wr_(j) - a(k, j)) / r_(j);
  RMatrix kk = wr_.asDiagonal() * y;
  kk = 0.5 * (kk + kk.transpose()).eval();
  const RVector r2 = r_.array().square().matrix();
  kernel_ = r2.asDiagonal() * kk * r2.asDiagonal();

  upper_ = build_component(grid.l_upper());
  lower_ = build_component(grid.l_lower());

  const RVector mu = (wr_.array() * r_.array().square()).matrix();
  const RMatrix id = RMatrix::Identity(ms_, ms_);
  radial_rt_ = 0.0;
  momentum_rt_ = 0.0;
  for (const Component* c : {&upper_, &lower_}) {
    radial_rt_ = std::max(radial_rt_, (c->values.transpose() * mu.asDiagonal() * c->values - id).cwiseAbs().maxCoeff());
    momentum_rt_ = std::max(momentum_rt_, (c->proj * c->proj.transpose() - id).cwiseAbs().maxCoeff());
  }
  if (!(radial_rt_ <= opts.roundtrip_tol)) {
    std::ostringstream os;
    os << "pair interaction: radial round-trip error " << radial_rt_ << " exceeds " << opts.roundtrip_tol
       << "; use a larger radial grid";
    throw NumericalError(os.str());
  }
  if (!(momentum_rt_ <= opts.roundtrip_tol)) {
    std::ostringstream os;
    os << "pair interaction: momentum round-trip error " << momentum_rt_ << " exceeds " << opts.roundtrip_tol
       << "; use more momentum nodes or a smaller basis";
    throw NumericalError(os.str());
  }
}

PairInteraction::Component PairInteraction::build_component(int l) const {
  Component c;
  c.l = l;
  const int alpha_gram = 2 * l + 2;
  const double alpha_lag = 2.0 * l + 1.0;
  const double two_lambda = 2.0 * lambda_;

  // Gram matrix of the raw Sturmians under r^2 dr, exact by Gauss-Laguerre.
  auto [xg, wg] = gauss_laguerre(ms_ + l + 4, alpha_gram, true);
  RMatrix lag(ms_, xg.size());
  for (Index i = 0; i < xg.size(); ++i) {
    const RVector s = laguerre_scaled_all(ms_ - 1, alpha_lag, xg(i));
    lag.col(i) = s;
  }
  const RMatrix gram = lag * wg.asDiagonal() * lag.transpose() / std::pow(two_lambda, 3);
  Eigen::LLT<RMatrix> llt(gram);
  if (llt.info() != Eigen::Success) throw NumericalError("pair interaction: Sturmian Gram matrix not positive definite");
  const RMatrix chol = llt.matrixL();

  const Index n = grid_.size();
  RMatrix ft(ms_, n);
  for (int k = 0; k < ms_; ++k)
    for (Index j = 0; j < n; ++j)
      ft(k, j) = sturmian_momentum(k, l, lambda_, grid_.nodes(j)) * std::sqrt(grid_.weights(j)) * grid_.nodes(j);
  c.proj = chol.triangularView<Eigen::Lower>().solve(ft);

  const Index mr = r_.size();
  RMatrix fpos(ms_, mr);
  for (Index k = 0; k < mr; ++k) {
    const double xr = two_lambda * r_(k);
    fpos.col(k) = laguerre_scaled_all(ms_ - 1, alpha_lag, xr) * std::pow(xr, l);
  }
  c.values = chol.triangularView<Eigen::Lower>().solve(fpos).transpose();
  return c;
}

void PairInteraction::radial_components(const CMatrix& vecs, CMatrix& upper, CMatrix& lower) const {
  const Index n = grid_.size();
  if (vecs.rows() != 2 * n) throw InvalidArgument("radial_components: vectors must have 2n rows");
  const Index cols = vecs.cols();
  CMatrix a(n, cols), b(n, cols);
  for (Index i = 0; i < n; ++i) {
    a.row(i) = vecs.row(2 * i);
    b.row(i) = vecs.row(2 * i + 1);
  }
  upper = upper_.values.cast<Complex>() * (upper_.proj.cast<Complex>() * a);
  lower = lower_.values.cast<Complex>() * (lower_.proj.cast<Complex>() * b);
}

RVector PairInteraction::capture_defect(const CMatrix& vecs) const {
  const Index n = grid_.size();
  if (vecs.rows() != 2 * n) throw InvalidArgument("capture_defect: vectors must have 2n rows");
  RVector out(vecs.cols());
  for (Index c = 0; c < vecs.cols(); ++c) {
    CVector a(n), b(n);
    for (Index i = 0; i < n; ++i) {
      a(i) = vecs(2 * i, c);
      b(i) = vecs(2 * i + 1, c);
    }
    const double total = vecs.col(c).squaredNorm();
    const double kept =
        (upper_.proj.cast<Complex>() * a).squaredNorm() + (lower_.proj.cast<Complex>() * b).squaredNorm();
    out(c) = total - kept;
  }
  return out;
}

CMatrix PairInteraction::pair_densities(const CMatrix& ga, const CMatrix& fa, const CMatrix& gc, const CMatrix& fc) {
  const Index mr = ga.rows();
  const Index na = ga.cols(), nc = gc.cols();
  CMatrix rho(mr, na * nc);
  for (Index a = 0; a < na; ++a) {
    for (Index c = 0; c < nc; ++c) {
      rho.col(a * nc + c) = ga.col(a).conjugate().cwiseProduct(gc.col(c)) + fa.col(a).conjugate().cwiseProduct(fc.col(c));
    }
  }
  return rho;
}

CMatrix PairInteraction::coulomb_form(const CMatrix& rho1, const CMatrix& rho2) const {
  return rho1.transpose() * (kernel_.cast<Complex>() * rho2);
}

CMatrix PairInteraction::pair_matrix_from_form(const CMatrix& t, Index n) {
  if (t.rows() != n * n || t.cols() != n * n) throw InvalidArgument("pair_matrix_from_form: size mismatch");
  CMatrix w(n * n, n * n);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index c = 0; c < n; ++c)
        for (Index d = 0; d < n; ++d) w(a * n + b, c * n + d) = t(a * n + c, b * n + d);
  return w;
}

CMatrix PairInteraction::interaction_matrix(const CMatrix& states) const {
  CMatrix g, f;
  radial_components(states, g, f);
  const CMatrix rho = pair_densities(g, f, g, f);
  return pair_matrix_from_form(coulomb_form(rho, rho), states.cols());
}

}  // namespace furry
