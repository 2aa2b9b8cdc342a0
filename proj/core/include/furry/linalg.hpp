#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace furry {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

// Largest singular value.
double spectral_norm(const CMatrix& a);

// ||a - a*||_max
double hermiticity_residual(const CMatrix& a);

CMatrix hermitian_part(const CMatrix& a);

bool all_finite(const CMatrix& a);

// f(h) for Hermitian h through its eigendecomposition.
CMatrix hermitian_function(const CMatrix& h, const std::function<double(double)>& f);

// Smallest / largest eigenvalue of the Hermitian part of h.
double min_eigenvalue(const CMatrix& h);
double max_eigenvalue(const CMatrix& h);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// Lift a one-slot operator into slot `slot` of an n_slots-fold tensor
// product with identity factors of side d elsewhere.
CMatrix lift_to_slot(const CMatrix& op, int slot, int n_slots);

// A ⊗ A ⊗ ... (n factors)
CMatrix kron_power(const CMatrix& a, int n);

}  // namespace furry
