#include "furry/decoupling.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "furry/error.hpp"

namespace furry {
namespace {

struct FreeEigenbasis {
  CMatrix q;     // d0 = q diag(lambda) q*
  RVector lambda;
};

FreeEigenbasis diagonalize_free(const CMatrix& d0) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(d0));
  if (es.info() != Eigen::Success) throw NumericalError("free operator eigensolver failed");
  return {es.eigenvectors(), es.eigenvalues()};
}

FreeEigenbasis fw_eigenbasis(const OneParticleSystem& sys) {
  const RVector e = free_energies(sys.grid);
  const Index n = sys.grid.size();
  RVector lambda(2 * n);
  for (Index i = 0; i < n; ++i) {
    lambda(2 * i) = e(i);
    lambda(2 * i + 1) = -e(i);
  }
  return {sys.u_fw.adjoint(), lambda};
}

MatrixSeries projection_series_in_basis(const FreeEigenbasis& fb, const CMatrix& v, int order) {
  if (order < 0) throw InvalidArgument("projection_series: order must be non-negative");
  const Index d = fb.lambda.size();
  if (v.rows() != d || v.cols() != d) throw InvalidArgument("projection_series: V has wrong size");
  for (Index a = 0; a < d; ++a)
    if (fb.lambda(a) == 0.0) throw NumericalError("projection_series: free operator has a zero eigenvalue");
  const CMatrix vt = fb.q.adjoint() * v * fb.q;
  std::vector<bool> plus(static_cast<size_t>(d));
  for (Index a = 0; a < d; ++a) plus[static_cast<size_t>(a)] = fb.lambda(a) > 0.0;

  std::vector<CMatrix> pt(static_cast<size_t>(order + 1), CMatrix::Zero(d, d));
  for (Index a = 0; a < d; ++a)
    if (plus[static_cast<size_t>(a)]) pt[0](a, a) = 1.0;

  for (int n = 1; n <= order; ++n) {
    CMatrix s = CMatrix::Zero(d, d);
    for (int m = 1; m <= n - 1; ++m) s.noalias() += pt[static_cast<size_t>(m)] * pt[static_cast<size_t>(n - m)];
    const CMatrix& prev = pt[static_cast<size_t>(n - 1)];
    CMatrix c = vt * prev;
    c.noalias() -= prev * vt;
    CMatrix& x = pt[static_cast<size_t>(n)];
    for (Index b = 0; b < d; ++b) {
      const bool pb = plus[static_cast<size_t>(b)];
      for (Index a = 0; a < d; ++a) {
        const bool pa = plus[static_cast<size_t>(a)];
        if (pa && pb)
          x(a, b) = -s(a, b);
        else if (!pa && !pb)
          x(a, b) = s(a, b);
        else
          x(a, b) = -c(a, b) / (fb.lambda(a) - fb.lambda(b));
      }
    }
  }
  std::vector<CMatrix> out;
  out.reserve(pt.size());
  for (const auto& c : pt) out.push_back(fb.q * c * fb.q.adjoint());
  return MatrixSeries(std::move(out));
}

std::vector<CMatrix> riesz_pass(const FreeEigenbasis& fb, const CMatrix& vt, const ContourSpec& contour, int order,
                                int m_nodes) {
  const Index d = fb.lambda.size();
  std::vector<CMatrix> acc(static_cast<size_t>(order + 1), CMatrix::Zero(d, d));
  for (int j = 0; j < m_nodes; ++j) {
    const double theta = 2.0 * std::numbers::pi * (j + 0.5) / m_nodes;
    const Complex e = std::polar(1.0, theta);
    const Complex z = contour.center + contour.radius * e;
    // (1/2 pi i) dz = (r e / m) dtheta-measure for the trapezoidal rule.
    const Complex wgt = contour.radius * e / static_cast<double>(m_nodes);
    CVector rd(d);
    for (Index a = 0; a < d; ++a) rd(a) = 1.0 / (z - fb.lambda(a));
    CMatrix term = rd.asDiagonal();
    acc[0] += wgt * term;
    for (int n = 1; n <= order; ++n) {
      CMatrix next = term * vt;
      term = next * rd.asDiagonal();
      acc[static_cast<size_t>(n)] += wgt * term;
    }
  }
  return acc;
}

}  // namespace

ContourSpec make_contour(const RVector& free_eigenvalues, double margin, int m_nodes) {
  if (!(margin > 0.0)) throw InvalidArgument("make_contour: margin must be positive");
  double g = INFINITY, lmax = -INFINITY;
  for (Index a = 0; a < free_eigenvalues.size(); ++a) {
    const double l = free_eigenvalues(a);
    if (l > 0.0) g = std::min(g, l);
    lmax = std::max(lmax, l);
  }
  if (!std::isfinite(g)) throw InvalidArgument("make_contour: no positive eigenvalue");
  ContourSpec c{Complex(0.5 * (g + lmax), 0.0), 0.5 * (lmax - g) + margin, m_nodes};
  validate_contour(c, free_eigenvalues);
  return c;
}

void validate_contour(const ContourSpec& c, const RVector& free_eigenvalues) {
  if (c.m_nodes < 16 || c.m_nodes % 2 != 0) {
    std::ostringstream os;
    os << "contour: m_nodes must be even and >= 16, got " << c.m_nodes;
    throw InvalidArgument(os.str());
  }
  if (!(c.radius > 0.0)) throw InvalidArgument("contour: radius must be positive");
  for (Index a = 0; a < free_eigenvalues.size(); ++a) {
    const double l = free_eigenvalues(a);
    const double dist = std::abs(Complex(l, 0.0) - c.center);
    const bool inside = dist < c.radius;
    if ((l > 0.0) != inside) {
      std::ostringstream os;
      os << "contour: eigenvalue " << l << (inside ? " enclosed" : " not enclosed") << " by circle (center "
         << c.center.real() << ", radius " << c.radius << ")";
      throw InvalidArgument(os.str());
    }
  }
}

MatrixSeries riesz_projection_series(const CMatrix& d0, const CMatrix& v, const ContourSpec& contour, int order,
                                     double convergence_tol) {
  if (order < 1) throw InvalidArgument("riesz_projection_series: order must be >= 1");
  const FreeEigenbasis fb = diagonalize_free(d0);
  validate_contour(contour, fb.lambda);
  const CMatrix vt = fb.q.adjoint() * v * fb.q;
  const auto coarse = riesz_pass(fb, vt, contour, order, contour.m_nodes);
  const auto fine = riesz_pass(fb, vt, contour, order, 2 * contour.m_nodes);
  double change = 0.0;
  int worst = 0;
  for (int n = 0; n <= order; ++n) {
    const double c = (coarse[static_cast<size_t>(n)] - fine[static_cast<size_t>(n)]).cwiseAbs().maxCoeff();
    if (c > change) {
      change = c;
      worst = n;
    }
  }
  if (!(change <= convergence_tol)) {
    std::ostringstream os;
    os << "riesz_projection_series: contour quadrature not converged (doubling m_nodes from " << contour.m_nodes
       << " changes coefficient " << worst << " by " << change << "); increase m_nodes";
    throw NumericalError(os.str());
  }
  std::vector<CMatrix> out;
  out.reserve(fine.size());
  for (const auto& c : fine) out.push_back(fb.q * c * fb.q.adjoint());
  return MatrixSeries(std::move(out));
}

MatrixSeries riesz_projection_series(const OneParticleSystem& sys, const ContourSpec& contour, int order,
                                     double convergence_tol) {
  return riesz_projection_series(sys.d0, sys.v, contour, order, convergence_tol);
}

MatrixSeries projection_series(const CMatrix& d0, const CMatrix& v, int order) {
  return projection_series_in_basis(diagonalize_free(d0), v, order);
}

MatrixSeries projection_series(const OneParticleSystem& sys, int order) {
  return projection_series_in_basis(fw_eigenbasis(sys), sys.v, order);
}

MatrixSeries u_gamma_series(const MatrixSeries& p_series, const CMatrix& p0) {
  const Index d = p_series.dim();
  const int k = p_series.order();
  if (p0.rows() != d || p0.cols() != d) throw InvalidArgument("u_gamma_series: P0 has wrong size");
  const double dev = (p_series[0] - p0).cwiseAbs().maxCoeff();
  if (dev > 1e-10) {
    std::ostringstream os;
    os << "u_gamma_series: leading projector coefficient differs from P0 by " << dev;
    throw InvalidArgument(os.str());
  }
  const CMatrix id = CMatrix::Identity(d, d);
  const MatrixSeries ident = MatrixSeries::identity(d, k);
  const MatrixSeries delta = MatrixSeries::constant(p0, k) - p_series;
  const MatrixSeries s = ident - delta * delta;
  const MatrixSeries r = series_inv_sqrt(s);
  const MatrixSeries a = p0 * p_series + (id - p0) * (ident - p_series);
  return a * r;
}

MatrixSeries h_diag_series(const CMatrix& d0, const CMatrix& v, const CMatrix& u_fw, const MatrixSeries& p_series,
                           const MatrixSeries& u_series) {
  const int k = p_series.order();
  MatrixSeries dser(d0.rows(), k);
  dser.coeff(0) = d0;
  if (k >= 1) dser.coeff(1) = v;
  const MatrixSeries up = u_series * p_series;
  const MatrixSeries inner = (up * dser) * series_adjoint(up);
  return (u_fw * inner) * CMatrix(u_fw.adjoint());
}

CMatrix exact_h_diag(const OneParticleSystem& sys) {
  const CMatrix up = sys.u_gamma * sys.p_plus_gamma;
  return sys.u_fw * up * sys.dgamma * up.adjoint() * sys.u_fw.adjoint();
}

DecouplingBundle build_decoupling_bundle(const OneParticleSystem& sys, int order) {
  DecouplingBundle b;
  b.p_series = projection_series(sys, order);
  b.u_series = u_gamma_series(b.p_series, sys.p_plus_0);
  b.h_diag_series = h_diag_series(sys.d0, sys.v, sys.u_fw, b.p_series, b.u_series);
  b.weight_neg_half = sys.abs_d0_neg_half;
  return b;
}

double remainder_weighted_norm(const CMatrix& exact, const MatrixSeries& series, int k, double gamma,
                               const CMatrix& weight) {
  if (k < 0 || k > series.order()) throw InvalidArgument("remainder_weighted_norm: k outside [0, order]");
  if (gamma == 0.0) {
    // Only the constant coefficient contributes.
    return spectral_norm(weight * (exact - series[0]) * weight);
  }
  const CMatrix approx = series_eval(series.truncated(k), gamma);
  return spectral_norm(weight * (exact - approx) * weight);
}

double resolvent_distance(const CMatrix& a, const CMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw InvalidArgument("resolvent_distance: shape mismatch");
  const double tol = 1e-10 * std::max(1.0, std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()));
  if (hermiticity_residual(a) > tol || hermiticity_residual(b) > tol)
    throw InvalidArgument("resolvent_distance: arguments must be Hermitian");
  const Index d = a.rows();
  const CMatrix shift = Complex(0.0, 1.0) * CMatrix::Identity(d, d);
  const CMatrix ra = Eigen::PartialPivLU<CMatrix>(a + shift).inverse();
  const CMatrix rb = Eigen::PartialPivLU<CMatrix>(b + shift).inverse();
  return spectral_norm(ra - rb);
}

double weighted_unitary_norm(const OneParticleSystem& sys) {
  return spectral_norm(sys.abs_d0_half * sys.u_gamma * sys.abs_d0_neg_half);
}

GeometricFit fit_geometric(const std::vector<double>& values, double floor) {
  GeometricFit f;
  const int n = static_cast<int>(values.size());
  if (n == 0) return f;
  auto step_ok = [&](int j) {
    return values[static_cast<size_t>(j + 1)] < values[static_cast<size_t>(j)] ||
           std::max(values[static_cast<size_t>(j)], values[static_cast<size_t>(j + 1)]) <= floor;
  };
  f.k0 = n - 1;
  for (int j = n - 2; j >= 0; --j) {
    if (!step_ok(j)) break;
    f.k0 = j;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int j = f.k0; j < n; ++j) {
    const double v = values[static_cast<size_t>(j)];
    if (!(v > floor)) continue;
    const double y = std::log(v);
    sx += j;
    sy += y;
    sxx += static_cast<double>(j) * j;
    sxy += j * y;
    ++m;
  }
  f.points = m;
  if (m >= 2) {
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    f.ratio = std::exp(slope);
  }
  return f;
}

}  // namespace furry
