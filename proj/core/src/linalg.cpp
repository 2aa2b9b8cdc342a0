#include "furry/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <unsupported/Eigen/KroneckerProduct>

#include "furry/error.hpp"

namespace furry {

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  const double scale = a.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  // Gram matrix of the smaller side; scaled to keep tiny inputs out of the
  // subnormal range.
  const CMatrix s = a / scale;
  CMatrix g = a.rows() <= a.cols() ? CMatrix(s * s.adjoint()) : CMatrix(s.adjoint() * s);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g, Eigen::EigenvaluesOnly);
  return scale * std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

double hermiticity_residual(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  return (a - a.adjoint()).cwiseAbs().maxCoeff();
}

CMatrix hermitian_part(const CMatrix& a) { return (a + a.adjoint()) / 2.0; }

bool all_finite(const CMatrix& a) { return a.allFinite(); }

CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h));
  if (es.info() != Eigen::Success) throw NumericalError("Hermitian eigensolver failed");
  RVector fv = es.eigenvalues().unaryExpr(f);
  const CMatrix& q = es.eigenvectors();
  return q * fv.cast<Complex>().asDiagonal() * q.adjoint();
}

double min_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian_part(h), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

CMatrix kron(const CMatrix& a, const CMatrix& b) { return Eigen::kroneckerProduct(a, b).eval(); }

CMatrix lift_to_slot(const CMatrix& op, int slot, int n_slots) {
  if (op.rows() != op.cols()) throw InvalidArgument("lift_to_slot: operator must be square");
  if (slot < 0 || slot >= n_slots) throw InvalidArgument("lift_to_slot: slot out of range");
  const Index d = op.rows();
  Index left = 1, right = 1;
  for (int j = 0; j < slot; ++j) left *= d;
  for (int j = slot + 1; j < n_slots; ++j) right *= d;
  CMatrix out = op;
  if (right > 1) out = kron(out, CMatrix::Identity(right, right));
  if (left > 1) out = kron(CMatrix::Identity(left, left), out);
  return out;
}

CMatrix kron_power(const CMatrix& a, int n) {
  if (n < 1) throw InvalidArgument("kron_power: n must be >= 1");
  CMatrix out = a;
  for (int j = 1; j < n; ++j) out = kron(out, a);
  return out;
}

}  // namespace furry
