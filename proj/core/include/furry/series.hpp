#pragma once

#include <vector>

#include "furry/linalg.hpp"

namespace furry {

// Truncated power series sum_{n=0}^{K} A_n gamma^n with square complex
// matrix coefficients. All coefficients share one side length.
class MatrixSeries {
 public:
  MatrixSeries() = default;
  // Zero series.
  MatrixSeries(Index dim, int order);
  explicit MatrixSeries(std::vector<CMatrix> coeffs);

  static MatrixSeries identity(Index dim, int order);
  // A_0 = c, higher coefficients zero.
  static MatrixSeries constant(const CMatrix& c, int order);

  Index dim() const { return dim_; }
  int order() const { return static_cast<int>(coeffs_.size()) - 1; }

  const CMatrix& operator[](int n) const { return coeffs_.at(static_cast<size_t>(n)); }
  CMatrix& coeff(int n) { return coeffs_.at(static_cast<size_t>(n)); }
  const std::vector<CMatrix>& coeffs() const { return coeffs_; }

  // Coefficients above k set to zero; order unchanged.
  MatrixSeries truncated(int k) const;

  // Throws NumericalError if any coefficient has a NaN or Inf entry.
  void check_finite() const;

 private:
  Index dim_ = 0;
  std::vector<CMatrix> coeffs_;
};

MatrixSeries series_add(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries series_sub(const MatrixSeries& a, const MatrixSeries& b);
MatrixSeries series_scale(const MatrixSeries& a, Complex s);
MatrixSeries series_mul(const MatrixSeries& a, const MatrixSeries& b);

// Left and right multiplication by a gamma-independent matrix.
MatrixSeries series_mul(const CMatrix& c, const MatrixSeries& a);
MatrixSeries series_mul(const MatrixSeries& a, const CMatrix& c);

// Two-sided inverse through order K. Throws NumericalError when the
// condition number of A_0 exceeds max_condition.
MatrixSeries series_inv(const MatrixSeries& a, double max_condition = 1e12);

// R with R R S = I through order K, for S_0 = I and Hermitian S_n.
MatrixSeries series_inv_sqrt(const MatrixSeries& s, double tol = 1e-12);

MatrixSeries series_adjoint(const MatrixSeries& a);

// Horner evaluation of the full series.
CMatrix series_eval(const MatrixSeries& a, double gamma);

MatrixSeries series_kron(const MatrixSeries& a, const MatrixSeries& b);

// gamma^shift * a, truncated at the same order. `dropped` is set when a
// nonzero coefficient falls off the top.
MatrixSeries series_shift(const MatrixSeries& a, int shift, bool* dropped = nullptr);

// max_n ||A_n - B_n||_max
double series_max_diff(const MatrixSeries& a, const MatrixSeries& b);

inline MatrixSeries operator+(const MatrixSeries& a, const MatrixSeries& b) { return series_add(a, b); }
inline MatrixSeries operator-(const MatrixSeries& a, const MatrixSeries& b) { return series_sub(a, b); }
inline MatrixSeries operator*(const MatrixSeries& a, const MatrixSeries& b) { return series_mul(a, b); }
inline MatrixSeries operator*(const CMatrix& c, const MatrixSeries& a) { return series_mul(c, a); }
inline MatrixSeries operator*(const MatrixSeries& a, const CMatrix& c) { return series_mul(a, c); }

}  // namespace furry
