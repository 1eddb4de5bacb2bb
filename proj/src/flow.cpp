#include "convflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "convflow/errors.hpp"

namespace convflow {

namespace {

// Wraps a raw solve result as a probability. The exact image of the flow map
// lies in the simplex, so negative entries are roundoff; their permitted size
// scales with the conditioning of (I - t M), which grows like 1/(1-t).
ProbabilityMeasure as_flow_probability(const GroupSpec& g, Eigen::VectorXd x,
                                       double one_minus_t) {
  const double floor = std::max(kMassTol, 1e-12 / one_minus_t);
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < 0.0) {
      if (x[i] < -floor)
        throw numerical_error("q_map: solve produced a negative weight beyond tolerance");
      x[i] = 0.0;
    }
  }
  const double mass = x.sum();
  if (!(mass > 0.0) || std::abs(mass - 1.0) > 1e-6)
    throw numerical_error("q_map: solve lost the unit mass");
  x /= mass;
  return ProbabilityMeasure(g, std::move(x));
}

}  // namespace

ProbabilityMeasure q_map(FlowTime t, const ProbabilityMeasure& mu) {
  if (t.is_limit())
    throw std::domain_error("q_map: t = 1 is outside the flow domain");
  const GroupSpec& g = mu.group();
  const int n = g.order();
  if (t.value() == 0.0) return mu;

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - t.value() * conv_matrix(mu);
  Eigen::VectorXd x = a.partialPivLu().solve(t.complement() * mu.weights());
  if (!x.allFinite()) throw numerical_error("q_map: linear solve failed");
  return as_flow_probability(g, std::move(x), t.complement());
}

ProbabilityMeasure q_iterate(FlowTime t, const ProbabilityMeasure& mu, int n) {
  if (n < 0) throw std::domain_error("q_iterate: n must be >= 0");
  ProbabilityMeasure out = mu;
  for (int k = 0; k < n; ++k) out = q_map(t, out);
  return out;
}

ProbabilityMeasure solve_modified_cd(FlowTime t, const ProbabilityMeasure& nu) {
  if (t.is_limit())
    throw std::domain_error("solve_modified_cd: t = 1 is outside the flow domain");
  const GroupSpec& g = nu.group();
  if (t.value() == 0.0) return nu;

  // F contracts total variation by the factor t, so the iteration budget
  // follows from t^k <= target; the stop test is the residual itself.
  const double target = kAlgebraTol / 4.0;
  const long budget =
      static_cast<long>(std::ceil(std::log(target / 2.0) / std::log(t.value()))) + 16;
  if (budget > 20'000'000)
    throw numerical_error("solve_modified_cd: contraction too slow at this t");

  const Eigen::MatrixXd m = conv_matrix(nu);
  const Eigen::VectorXd base = t.complement() * nu.weights();
  Eigen::VectorXd x = nu.weights();
  for (long k = 0; k < budget; ++k) {
    Eigen::VectorXd next = base + t.value() * (m * x);
    const double residual = (next - x).lpNorm<1>();
    x = std::move(next);
    if (residual <= target) {
      x /= x.sum();  // shed the per-step mass drift of the long chain
      return ProbabilityMeasure(g, std::move(x));
    }
  }
  throw numerical_error("solve_modified_cd: residual did not reach tolerance");
}

SignedMeasure generator(const ProbabilityMeasure& mu) {
  return convolve(SignedMeasure(mu.group(), mu.weights()),
                  SignedMeasure(mu.group(), mu.weights())) -
         SignedMeasure(mu.group(), mu.weights());
}

DifferentialOperator differential(FlowTime t, const ProbabilityMeasure& mu) {
  if (t.is_limit())
    throw std::domain_error("differential: t = 1 is outside the flow domain");
  const SignedMeasure inv = neumann_inverse(mu, t);
  SignedMeasure symbol = t.complement() * convolve(inv, inv);
  Eigen::MatrixXd matrix = conv_matrix(symbol);
  return DifferentialOperator{std::move(symbol), std::move(matrix)};
}

Eigen::MatrixXd tangent_basis(int n) {
  if (n < 1) throw std::invalid_argument("tangent_basis: n must be >= 1");
  Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(n, 1);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(ones);
  Eigen::MatrixXd q = qr.householderQ();
  return q.rightCols(n - 1);
}

std::vector<std::complex<double>> tangent_spectrum(FlowTime t, const ProbabilityMeasure& mu) {
  const int n = mu.group().order();
  if (n == 1) return {};
  const DifferentialOperator d = differential(t, mu);
  const Eigen::MatrixXd b = tangent_basis(n);
  const Eigen::MatrixXd restricted = b.transpose() * d.matrix * b;
  Eigen::EigenSolver<Eigen::MatrixXd> es(restricted);
  if (es.info() != Eigen::Success)
    throw numerical_error("tangent_spectrum: eigenvalue iteration failed");
  std::vector<std::complex<double>> out(es.eigenvalues().data(),
                                        es.eigenvalues().data() + n - 1);
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    const double ax = std::abs(x), ay = std::abs(y);
    if (ax != ay) return ax < ay;
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return out;
}

}  // namespace convflow
