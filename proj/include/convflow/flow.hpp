#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "convflow/flow_time.hpp"
#include "convflow/measure.hpp"
#include "convflow/series.hpp"

namespace convflow {

// Q_t(mu) = (1-t) mu * (1 - t mu)^{-1}, the time-t flow map. Computed by one
// linear solve (I - t M(mu)) x = (1-t) vec(mu), which stays accurate as
// t -> 1^- where series summation degrades. Throws std::domain_error at the
// extended time t = 1.
ProbabilityMeasure q_map(FlowTime t, const ProbabilityMeasure& mu);

// n-fold composition of q_map at fixed t. Matches q_map(delta_power(t, n))
// up to accumulated roundoff.
ProbabilityMeasure q_iterate(FlowTime t, const ProbabilityMeasure& mu, int n);

// The unique mu_t with (1-t) nu + t nu * mu_t = mu_t, found by iterating the
// contraction F(x) = (1-t) nu + t nu * x. Independent route to the same
// point as q_map(t, nu); residual of the returned measure is <= kAlgebraTol.
ProbabilityMeasure solve_modified_cd(FlowTime t, const ProbabilityMeasure& nu);

// chi(mu) = mu*mu - mu, the vector field generating the flow in delta time:
// d/dh|0 Q_h(mu) = chi(mu). Total mass is zero.
SignedMeasure generator(const ProbabilityMeasure& mu);

// Derivative of Q_t at mu: convolution by (1-t)(1 - t mu)^{-2}. The matrix
// maps sum-zero vectors to sum-zero vectors; symbol is the convolving measure.
struct DifferentialOperator {
  SignedMeasure symbol;
  Eigen::MatrixXd matrix;
};
DifferentialOperator differential(FlowTime t, const ProbabilityMeasure& mu);

// Orthonormal basis of the sum-zero subspace of R^n, as the columns of an
// n x (n-1) matrix.
Eigen::MatrixXd tangent_basis(int n);

// Eigenvalues of the differential restricted to the sum-zero tangent space
// of the probability simplex, sorted by (modulus, real, imaginary).
std::vector<std::complex<double>> tangent_spectrum(FlowTime t, const ProbabilityMeasure& mu);

}  // namespace convflow
