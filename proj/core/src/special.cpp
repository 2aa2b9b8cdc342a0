#include "furry/special.hpp"

#include <cmath>
#include <numbers>

#include "furry/error.hpp"

namespace furry {

std::pair<RVector, RVector> gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre: n must be positive");
  RVector x(n), w(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
    }
    x(i) = -z;
    x(n - 1 - i) = z;
    w(i) = w(n - 1 - i) = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x(n / 2) = 0.0;
  return {x, w};
}

std::pair<RVector, RVector> gauss_laguerre(int n, double alpha, bool scaled) {
  if (n < 1) throw InvalidArgument("gauss_laguerre: n must be positive");
  if (!(alpha > -1.0)) throw InvalidArgument("gauss_laguerre: alpha must exceed -1");
  // Nodes from the Jacobi matrix, polished by Newton; weights from
  // w_i = Gamma(n+alpha+1) x_i / (n! (n+1)^2 L_{n+1}(x_i)^2), which keeps full
  // relative accuracy for the tiny weights at large nodes.
  RMatrix jac = RMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i) jac(i, i) = 2.0 * i + alpha + 1.0;
  for (int i = 1; i < n; ++i) jac(i, i - 1) = jac(i - 1, i) = std::sqrt(i * (i + alpha));
  Eigen::SelfAdjointEigenSolver<RMatrix> es(jac, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NumericalError("gauss_laguerre: eigensolver failed");
  RVector x = es.eigenvalues();
  RVector w(n);
  const double log_c = std::lgamma(n + alpha + 1.0) - std::lgamma(n + 1.0) - 2.0 * std::log(n + 1.0);
  for (int i = 0; i < n; ++i) {
    for (int it = 0; it < 3; ++it) {
      const RVector l = laguerre_scaled_all(n, alpha, x(i));
      // x L_n' = n L_n - (n + alpha) L_{n-1}; the e^{-x/2} scale cancels.
      const double deriv = (n * l(n) - (n + alpha) * l(n - 1)) / x(i);
      if (deriv == 0.0) break;
      x(i) -= l(n) / deriv;
    }
    const RVector l = laguerre_scaled_all(n + 1, alpha, x(i));
    const double log_we = log_c + std::log(x(i)) - 2.0 * std::log(std::abs(l(n + 1)));
    w(i) = scaled ? std::exp(log_we) : std::exp(log_we - x(i));
  }
  return {x, w};
}

double legendre_q(int l, double z, double zm1) {
  if (l < 0) throw InvalidArgument("legendre_q: l must be non-negative");
  if (!(zm1 > 0.0)) throw InvalidArgument("legendre_q: requires z > 1");
  if (z < 1.6) {
    // Upward recurrence is stable near the singularity.
    const double q0 = 0.5 * std::log1p(2.0 / zm1);
    if (l == 0) return q0;
    double qa = q0, qb = z * q0 - 1.0;
    for (int k = 1; k < l; ++k) {
      const double qc = ((2 * k + 1) * z * qb - k * qa) / (k + 1);
      qa = qb;
      qb = qc;
    }
    return qb;
  }
  // Hypergeometric form, free of the cancellation that spoils the
  // recurrence for large z:
  // Q_l(z) = sqrt(pi) l! / (Gamma(l+3/2) (2z)^{l+1}) 2F1((l+1)/2, (l+2)/2; l+3/2; 1/z^2)
  const double x = 1.0 / (z * z);
  const double a = 0.5 * (l + 1), b = 0.5 * (l + 2), c = l + 1.5;
  double term = 1.0, sum = 1.0;
  for (int m = 0; m < 2000; ++m) {
    term *= (a + m) * (b + m) / ((c + m) * (m + 1)) * x;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  const double logpref = 0.5 * std::log(std::numbers::pi) + std::lgamma(l + 1.0) - std::lgamma(l + 1.5) -
                         (l + 1) * std::log(2.0 * z);
  return std::exp(logpref) * sum;
}

RVector legendre_p_all(int m, double x) {
  RVector p(m + 1);
  p(0) = 1.0;
  if (m >= 1) p(1) = x;
  for (int k = 1; k < m; ++k) p(k + 1) = ((2 * k + 1) * x * p(k) - k * p(k - 1)) / (k + 1);
  return p;
}

double gegenbauer(int k, double a, double x) {
  if (k == 0) return 1.0;
  double c0 = 1.0, c1 = 2.0 * a * x;
  for (int n = 1; n < k; ++n) {
    const double c2 = (2.0 * x * (n + a) * c1 - (n + 2.0 * a - 1.0) * c0) / (n + 1);
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

RVector laguerre_scaled_all(int m, double alpha, double x) {
  // Starting the recurrence from the scaled seeds keeps every iterate of
  // the size of the final result.
  RVector out(m + 1);
  const double e = std::exp(-x / 2.0);
  out(0) = e;
  if (m >= 1) out(1) = (1.0 + alpha - x) * e;
  for (int k = 1; k < m; ++k)
    out(k + 1) = ((2.0 * k + 1.0 + alpha - x) * out(k) - (k + alpha) * out(k - 1)) / (k + 1);
  return out;
}

}  // namespace furry
