#include <gtest/gtest.h>

#include <random>

#include "furry/error.hpp"
#include "furry/series.hpp"
#include "test_support.hpp"

using namespace furry;
using furry::test::max_abs;
using furry::test::random_hermitian;
using furry::test::random_matrix;
using furry::test::random_series;
using furry::test::scalar_series;

namespace {

void expect_scalars(const MatrixSeries& s, std::initializer_list<double> want, double tol) {
  ASSERT_EQ(s.dim(), 1);
  ASSERT_EQ(static_cast<size_t>(s.order() + 1), want.size());
  int n = 0;
  for (double w : want) {
    EXPECT_NEAR(s[n](0, 0).real(), w, tol) << "coefficient " << n;
    EXPECT_NEAR(s[n](0, 0).imag(), 0.0, tol) << "coefficient " << n;
    ++n;
  }
}

double rel_diff(const MatrixSeries& a, const MatrixSeries& b) {
  double scale = 1.0;
  for (int n = 0; n <= a.order(); ++n) scale = std::max(scale, max_abs(a[n]));
  return series_max_diff(a, b) / scale;
}

}  // namespace

TEST(SeriesAdd, ZeroIsNeutral) {
  std::mt19937_64 rng(1);
  const auto a = random_series(3, 4, rng);
  EXPECT_EQ(series_max_diff(a + MatrixSeries(3, 4), a), 0.0);
}

TEST(SeriesAdd, Cancellation) {
  std::mt19937_64 rng(2);
  const CMatrix a = random_matrix(3, 3, rng);
  const CMatrix id = CMatrix::Identity(3, 3);
  const MatrixSeries s = MatrixSeries({id, a}) + MatrixSeries({id, CMatrix(-a)});
  EXPECT_EQ(max_abs(s[0] - 2.0 * id), 0.0);
  EXPECT_EQ(max_abs(s[1]), 0.0);
}

TEST(SeriesAdd, Scalars) { expect_scalars(scalar_series({1, 2, 3}) + scalar_series({4, 5, 6}), {5, 7, 9}, 0.0); }

TEST(SeriesAdd, MismatchThrows) {
  EXPECT_THROW(series_add(MatrixSeries(2, 3), MatrixSeries(3, 3)), InvalidArgument);
  EXPECT_THROW(series_add(MatrixSeries(2, 3), MatrixSeries(2, 4)), InvalidArgument);
  EXPECT_THROW(series_mul(MatrixSeries(2, 3), MatrixSeries(2, 2)), InvalidArgument);
}

TEST(SeriesMul, Telescoping) {
  std::mt19937_64 rng(3);
  const CMatrix a = random_matrix(4, 4, rng);
  const CMatrix id = CMatrix::Identity(4, 4);
  const MatrixSeries p({id, a, CMatrix::Zero(4, 4)});
  const MatrixSeries m({id, CMatrix(-a), CMatrix::Zero(4, 4)});
  const MatrixSeries c = p * m;
  EXPECT_LT(max_abs(c[0] - id), 1e-15);
  EXPECT_LT(max_abs(c[1]), 1e-14);
  EXPECT_LT(max_abs(c[2] + a * a), 1e-13);
}

TEST(SeriesMul, IdentityIsNeutral) {
  std::mt19937_64 rng(4);
  const auto b = random_series(3, 5, rng);
  EXPECT_EQ(series_max_diff(MatrixSeries::identity(3, 5) * b, b), 0.0);
  EXPECT_EQ(series_max_diff(b * MatrixSeries::identity(3, 5), b), 0.0);
}

TEST(SeriesMul, TruncatedExponential) {
  expect_scalars(scalar_series({1, 1, 0.5}) * scalar_series({1, 1, 0.5}), {1, 2, 2}, 1e-15);
}

TEST(SeriesMul, MatrixTimesSeries) {
  std::mt19937_64 rng(5);
  const auto a = random_series(3, 3, rng);
  const CMatrix c = random_matrix(3, 3, rng);
  EXPECT_LT(series_max_diff(c * a, MatrixSeries::constant(c, 3) * a), 1e-13);
  EXPECT_LT(series_max_diff(a * c, a * MatrixSeries::constant(c, 3)), 1e-13);
}

TEST(SeriesInv, Identity) {
  EXPECT_EQ(series_max_diff(series_inv(MatrixSeries::identity(3, 4)), MatrixSeries::identity(3, 4)), 0.0);
}

TEST(SeriesInv, Geometric) { expect_scalars(series_inv(scalar_series({1, -1, 0, 0})), {1, 1, 1, 1}, 1e-15); }

TEST(SeriesInv, FirstOrder) {
  std::mt19937_64 rng(6);
  const CMatrix a = random_matrix(3, 3, rng);
  const CMatrix id = CMatrix::Identity(3, 3);
  const MatrixSeries s({id, a, CMatrix::Zero(3, 3)});
  const MatrixSeries b = series_inv(s);
  EXPECT_LT(max_abs(b[0] - id), 1e-15);
  EXPECT_LT(max_abs(b[1] + a), 1e-14);
  EXPECT_LT(max_abs(b[2] - a * a), 1e-13);
  EXPECT_LT(series_max_diff(s * b, MatrixSeries::identity(3, 2)), 1e-13);
}

TEST(SeriesInv, SingularLeadingTermThrows) {
  CMatrix a0 = CMatrix::Identity(2, 2);
  a0(1, 1) = 0.0;
  EXPECT_THROW(series_inv(MatrixSeries::constant(a0, 2)), NumericalError);
  a0(1, 1) = 1e-14;
  EXPECT_THROW(series_inv(MatrixSeries::constant(a0, 2)), NumericalError);
}

TEST(SeriesInv, RandomTwoSided) {
  std::mt19937_64 rng(7);
  const int k = 10;
  MatrixSeries a = random_series(5, k, rng, 0.3);
  a.coeff(0) += 4.0 * CMatrix::Identity(5, 5);
  const MatrixSeries b = series_inv(a);
  EXPECT_LT(rel_diff(b * a, MatrixSeries::identity(5, k)), 1e-11);
  EXPECT_LT(rel_diff(a * b, MatrixSeries::identity(5, k)), 1e-11);
}

TEST(SeriesInvSqrt, Identity) {
  EXPECT_LT(series_max_diff(series_inv_sqrt(MatrixSeries::identity(3, 4)), MatrixSeries::identity(3, 4)), 1e-15);
}

TEST(SeriesInvSqrt, BinomialSequence) {
  // (1 + x)^{-1/2}: C(-1/2, n) computed by the product formula.
  const MatrixSeries r = series_inv_sqrt(scalar_series({1, 1, 0, 0, 0}));
  double c = 1.0;
  for (int n = 0; n <= 4; ++n) {
    EXPECT_NEAR(r[n](0, 0).real(), c, 1e-15) << n;
    c *= (-0.5 - n) / (n + 1);
  }
  expect_scalars(r, {1.0, -0.5, 0.375, -0.3125, 35.0 / 128.0}, 1e-15);
}

TEST(SeriesInvSqrt, SecondOrderTerm) {
  std::mt19937_64 rng(8);
  const CMatrix b = random_hermitian(4, rng);
  const CMatrix id = CMatrix::Identity(4, 4);
  const MatrixSeries s({id, CMatrix::Zero(4, 4), b});
  const MatrixSeries r = series_inv_sqrt(s);
  EXPECT_LT(max_abs(r[0] - id), 1e-15);
  EXPECT_LT(max_abs(r[1]), 1e-15);
  EXPECT_LT(max_abs(r[2] + b / 2.0), 1e-14);
  EXPECT_LT(series_max_diff(r * r * s, MatrixSeries::identity(4, 2)), 1e-13);
}

TEST(SeriesInvSqrt, RandomHermitianSquaresBack) {
  std::mt19937_64 rng(9);
  const int k = 12;
  MatrixSeries s(6, k);
  s.coeff(0) = CMatrix::Identity(6, 6);
  for (int n = 1; n <= k; ++n) s.coeff(n) = 0.2 * random_hermitian(6, rng);
  const MatrixSeries r = series_inv_sqrt(s);
  EXPECT_LT(rel_diff(r * r * s, MatrixSeries::identity(6, k)), 1e-10);
  for (int n = 0; n <= k; ++n) EXPECT_LT(max_abs(r[n] - r[n].adjoint()), 1e-12) << n;
}

TEST(SeriesInvSqrt, RejectsUnnormalized) {
  EXPECT_THROW(series_inv_sqrt(scalar_series({1.1, 1, 0})), InvalidArgument);
  MatrixSeries s = MatrixSeries::identity(2, 2);
  s.coeff(1)(0, 1) = 1.0;  // not Hermitian
  EXPECT_THROW(series_inv_sqrt(s), InvalidArgument);
}

TEST(SeriesAdjoint, IdentityAndInvolution) {
  std::mt19937_64 rng(10);
  EXPECT_EQ(series_max_diff(series_adjoint(MatrixSeries::identity(3, 3)), MatrixSeries::identity(3, 3)), 0.0);
  const auto a = random_series(3, 3, rng);
  EXPECT_EQ(series_max_diff(series_adjoint(series_adjoint(a)), a), 0.0);
}

TEST(SeriesAdjoint, NilpotentCoefficient) {
  CMatrix a1 = CMatrix::Zero(2, 2);
  a1(0, 1) = 1.0;
  const MatrixSeries a({CMatrix::Zero(2, 2), a1});
  CMatrix want = CMatrix::Zero(2, 2);
  want(1, 0) = 1.0;
  EXPECT_EQ(max_abs(series_adjoint(a)[1] - want), 0.0);
}

TEST(SeriesAdjoint, AntiHomomorphism) {
  std::mt19937_64 rng(11);
  const auto a = random_series(4, 6, rng);
  const auto b = random_series(4, 6, rng);
  EXPECT_LT(rel_diff(series_adjoint(a * b), series_adjoint(b) * series_adjoint(a)), 1e-12);
}

TEST(SeriesEval, Basics) {
  std::mt19937_64 rng(12);
  const auto a = random_series(3, 4, rng);
  EXPECT_EQ(max_abs(series_eval(a, 0.0) - a[0]), 0.0);
  EXPECT_LT(max_abs(series_eval(MatrixSeries::identity(3, 4), 0.7) - CMatrix::Identity(3, 3)), 1e-15);
  EXPECT_DOUBLE_EQ(series_eval(scalar_series({1, 1, 1}), 0.5)(0, 0).real(), 1.75);
  EXPECT_THROW(series_eval(a, std::nan("")), InvalidArgument);
}

TEST(SeriesEval, ProductOfLowDegreePolynomials) {
  // Factors of degree <= K/2 multiply without truncation.
  std::mt19937_64 rng(13);
  const int k = 8;
  const auto a = random_series(3, k, rng).truncated(k / 2);
  const auto b = random_series(3, k, rng).truncated(k / 2);
  for (double g : {0.05, 0.3, 1.0}) {
    const CMatrix lhs = series_eval(a * b, g);
    const CMatrix rhs = series_eval(a, g) * series_eval(b, g);
    EXPECT_LT(max_abs(lhs - rhs) / std::max(1.0, max_abs(rhs)), 1e-12) << g;
  }
}

TEST(SeriesKron, Identity) {
  const auto k = series_kron(MatrixSeries::identity(2, 3), MatrixSeries::identity(3, 3));
  EXPECT_EQ(k.dim(), 6);
  EXPECT_EQ(series_max_diff(k, MatrixSeries::identity(6, 3)), 0.0);
}

TEST(SeriesKron, Scalars) { expect_scalars(series_kron(scalar_series({1, 1}), scalar_series({1, 1})), {1, 2}, 0.0); }

TEST(SeriesKron, Bilinear) {
  std::mt19937_64 rng(14);
  const auto a = random_series(2, 2, rng).truncated(1);
  const auto b = random_series(3, 2, rng).truncated(1);
  const double g = 0.37;
  const CMatrix lhs = series_eval(series_kron(a, b), g);
  const CMatrix rhs = kron(series_eval(a, g), series_eval(b, g));
  EXPECT_LT(max_abs(lhs - rhs), 1e-12);
  EXPECT_THROW(series_kron(MatrixSeries(2, 2), MatrixSeries(2, 3)), InvalidArgument);
}

TEST(SeriesProperties, RingIdentities) {
  std::mt19937_64 rng(15);
  const int k = 8;
  const auto a = random_series(4, k, rng);
  const auto b = random_series(4, k, rng);
  const auto c = random_series(4, k, rng);
  EXPECT_LT(rel_diff((a * b) * c, a * (b * c)), 1e-12);
  EXPECT_LT(rel_diff(a * (b + c), a * b + a * c), 1e-12);
  EXPECT_LT(rel_diff((a + b) * c, a * c + b * c), 1e-12);
  EXPECT_LT(rel_diff((a + b) + c, a + (b + c)), 1e-15);
}

TEST(SeriesShift, DropsTopCoefficient) {
  bool dropped = false;
  const auto s = series_shift(scalar_series({1, 2, 3}), 1, &dropped);
  expect_scalars(s, {0, 1, 2}, 0.0);
  EXPECT_TRUE(dropped);
  series_shift(scalar_series({1, 2, 0}), 1, &dropped);
  EXPECT_FALSE(dropped);
}

TEST(SeriesCheck, NonFiniteRejected) {
  MatrixSeries s = MatrixSeries::identity(2, 1);
  EXPECT_NO_THROW(s.check_finite());
  s.coeff(1)(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(s.check_finite(), NumericalError);
}
