#include "furry/series.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/KroneckerProduct>

#include "furry/error.hpp"

namespace furry {
namespace {

void require_same_shape(const MatrixSeries& a, const MatrixSeries& b, const char* op) {
  if (a.dim() != b.dim() || a.order() != b.order()) {
    std::ostringstream os;
    os << op << ": shape mismatch (dim " << a.dim() << " vs " << b.dim() << ", order " << a.order()
       << " vs " << b.order() << ")";
    throw InvalidArgument(os.str());
  }
}

std::vector<bool> nonzero_mask(const MatrixSeries& a) {
  std::vector<bool> m(static_cast<size_t>(a.order() + 1));
  for (int n = 0; n <= a.order(); ++n) m[static_cast<size_t>(n)] = !a[n].isZero(0.0);
  return m;
}

}  // namespace

MatrixSeries::MatrixSeries(Index dim, int order) : dim_(dim) {
  if (dim < 1) throw InvalidArgument("MatrixSeries: dim must be positive");
  if (order < 0) throw InvalidArgument("MatrixSeries: order must be non-negative");
  coeffs_.assign(static_cast<size_t>(order + 1), CMatrix::Zero(dim, dim));
}

MatrixSeries::MatrixSeries(std::vector<CMatrix> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw InvalidArgument("MatrixSeries: need at least one coefficient");
  dim_ = coeffs_.front().rows();
  if (dim_ < 1) throw InvalidArgument("MatrixSeries: dim must be positive");
  for (const auto& c : coeffs_) {
    if (c.rows() != dim_ || c.cols() != dim_)
      throw InvalidArgument("MatrixSeries: coefficients must be square with equal sides");
  }
  check_finite();
}

MatrixSeries MatrixSeries::identity(Index dim, int order) {
  MatrixSeries s(dim, order);
  s.coeff(0).setIdentity();
  return s;
}

MatrixSeries MatrixSeries::constant(const CMatrix& c, int order) {
  if (c.rows() != c.cols()) throw InvalidArgument("MatrixSeries::constant: matrix must be square");
  MatrixSeries s(c.rows(), order);
  s.coeff(0) = c;
  return s;
}

MatrixSeries MatrixSeries::truncated(int k) const {
  MatrixSeries out = *this;
  for (int n = std::max(k + 1, 0); n <= order(); ++n) out.coeff(n).setZero();
  return out;
}

void MatrixSeries::check_finite() const {
  for (size_t n = 0; n < coeffs_.size(); ++n) {
    if (!coeffs_[n].allFinite()) {
      std::ostringstream os;
      os << "MatrixSeries: non-finite entry in coefficient " << n;
      throw NumericalError(os.str());
    }
  }
}

MatrixSeries series_add(const MatrixSeries& a, const MatrixSeries& b) {
  require_same_shape(a, b, "series_add");
  MatrixSeries c = a;
  for (int n = 0; n <= a.order(); ++n) c.coeff(n) += b[n];
  return c;
}

MatrixSeries series_sub(const MatrixSeries& a, const MatrixSeries& b) {
  require_same_shape(a, b, "series_sub");
  MatrixSeries c = a;
  for (int n = 0; n <= a.order(); ++n) c.coeff(n) -= b[n];
  return c;
}

MatrixSeries series_scale(const MatrixSeries& a, Complex s) {
  MatrixSeries c = a;
  for (int n = 0; n <= a.order(); ++n) c.coeff(n) *= s;
  return c;
}

MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b) {
  require_same_shape(a, b, "series_mul");
  const int k = a.order();
  const auto za = nonzero_mask(a);
  const auto zb = nonzero_mask(b);
  MatrixSeries c(a.dim(), k);
  for (int n = 0; n <= k; ++n) {
    CMatrix& cn = c.coeff(n);
    for (int m = 0; m <= n; ++m) {
      if (!za[static_cast<size_t>(m)] || !zb[static_cast<size_t>(n - m)]) continue;
      cn.noalias() += a[m] * b[n - m];
    }
  }
  return c;
}

MatrixSeries series_mul(const CMatrix& c, const MatrixSeries& a) {
  if (c.rows() != a.dim() || c.cols() != a.dim()) throw InvalidArgument("series_mul: dimension mismatch");
  MatrixSeries out(a.dim(), a.order());
  for (int n = 0; n <= a.order(); ++n)
    if (!a[n].isZero(0.0)) out.coeff(n).noalias() = c * a[n];
  return out;
}

MatrixSeries series_mul(const MatrixSeries& a, const CMatrix& c) {
  if (c.rows() != a.dim() || c.cols() != a.dim()) throw InvalidArgument("series_mul: dimension mismatch");
  MatrixSeries out(a.dim(), a.order());
  for (int n = 0; n <= a.order(); ++n)
    if (!a[n].isZero(0.0)) out.coeff(n).noalias() = a[n] * c;
  return out;
}

MatrixSeries series_inv(const MatrixSeries& a, double max_condition) {
  const Index d = a.dim();
  const int k = a.order();
  CMatrix a0inv;
  if (a[0].isIdentity(0.0)) {
    a0inv = CMatrix::Identity(d, d);
  } else {
    Eigen::BDCSVD<CMatrix> svd(a[0]);
    const RVector& sv = svd.singularValues();
    const double smax = sv(0);
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || smax / smin > max_condition) {
      std::ostringstream os;
      os.precision(6);
      os << "series_inv: leading coefficient is singular or ill-conditioned (smallest singular value "
         << smin << ", condition " << (smin > 0.0 ? smax / smin : INFINITY) << " > " << max_condition << ")";
      throw NumericalError(os.str());
    }
    a0inv = Eigen::PartialPivLU<CMatrix>(a[0]).inverse();
  }
  const auto za = nonzero_mask(a);
  MatrixSeries b(d, k);
  b.coeff(0) = a0inv;
  for (int n = 1; n <= k; ++n) {
    CMatrix acc = CMatrix::Zero(d, d);
    for (int m = 1; m <= n; ++m) {
      if (!za[static_cast<size_t>(m)]) continue;
      acc.noalias() += a[m] * b[n - m];
    }
    b.coeff(n).noalias() = -(a0inv * acc);
  }
  b.check_finite();
  return b;
}

MatrixSeries series_inv_sqrt(const MatrixSeries& s, double tol) {
  const Index d = s.dim();
  const int k = s.order();
  const double dev = (s[0] - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    std::ostringstream os;
    os << "series_inv_sqrt: leading coefficient differs from identity by " << dev << " (tolerance " << tol
       << ")";
    throw InvalidArgument(os.str());
  }
  for (int n = 0; n <= k; ++n) {
    const double h = hermiticity_residual(s[n]);
    if (h > tol) {
      std::ostringstream os;
      os << "series_inv_sqrt: coefficient " << n << " is not Hermitian (residual " << h << ")";
      throw InvalidArgument(os.str());
    }
  }
  // R^2 = S^{-1}: with R_0 = I, 2 R_n = T_n - sum_{m=1}^{n-1} R_m R_{n-m}.
  // Every coefficient is a polynomial in S_1..S_n, so R commutes with S
  // order by order and R R S = I.
  const MatrixSeries t = series_inv(s);
  MatrixSeries r(d, k);
  r.coeff(0).setIdentity();
  for (int n = 1; n <= k; ++n) {
    CMatrix acc = t[n];
    for (int m = 1; m <= n - 1; ++m) acc.noalias() -= r[m] * r[n - m];
    r.coeff(n) = acc / 2.0;
  }
  r.check_finite();
  return r;
}

MatrixSeries series_adjoint(const MatrixSeries& a) {
  MatrixSeries c(a.dim(), a.order());
  for (int n = 0; n <= a.order(); ++n) c.coeff(n) = a[n].adjoint();
  return c;
}

CMatrix series_eval(const MatrixSeries& a, double gamma) {
  if (!std::isfinite(gamma)) throw InvalidArgument("series_eval: gamma must be finite");
  CMatrix acc = a[a.order()];
  for (int n = a.order() - 1; n >= 0; --n) {
    acc *= gamma;
    acc += a[n];
  }
  return acc;
}

MatrixSeries series_kron(const MatrixSeries& a, const MatrixSeries& b) {
  if (a.order() != b.order()) throw InvalidArgument("series_kron: order mismatch");
  const int k = a.order();
  const auto za = nonzero_mask(a);
  const auto zb = nonzero_mask(b);
  MatrixSeries c(a.dim() * b.dim(), k);
  for (int n = 0; n <= k; ++n) {
    for (int m = 0; m <= n; ++m) {
      if (!za[static_cast<size_t>(m)] || !zb[static_cast<size_t>(n - m)]) continue;
      c.coeff(n) += Eigen::kroneckerProduct(a[m], b[n - m]).eval();
    }
  }
  return c;
}

MatrixSeries series_shift(const MatrixSeries& a, int shift, bool* dropped) {
  if (shift < 0) throw InvalidArgument("series_shift: shift must be non-negative");
  const int k = a.order();
  bool lost = false;
  for (int n = std::max(0, k - shift + 1); n <= k; ++n) lost = lost || !a[n].isZero(0.0);
  MatrixSeries c(a.dim(), k);
  for (int n = shift; n <= k; ++n) c.coeff(n) = a[n - shift];
  if (dropped) *dropped = lost;
  return c;
}

double series_max_diff(const MatrixSeries& a, const MatrixSeries& b) {
  require_same_shape(a, b, "series_max_diff");
  double m = 0.0;
  for (int n = 0; n <= a.order(); ++n) m = std::max(m, (a[n] - b[n]).cwiseAbs().maxCoeff());
  return m;
}

}  // namespace furry
