#include "convflow/measure.hpp"

#include <stdexcept>

namespace convflow {

SignedMeasure::SignedMeasure(GroupSpec group, Eigen::VectorXd weights)
    : group_(std::move(group)), weights_(std::move(weights)) {
  if (weights_.size() != group_.order())
    throw std::invalid_argument("SignedMeasure: weight count must equal the group order");
  if (!weights_.allFinite())
    throw std::invalid_argument("SignedMeasure: weights must be finite");
}

double SignedMeasure::weight(int element) const {
  if (element < 0 || element >= group_.order())
    throw std::out_of_range("SignedMeasure: element index out of range");
  return weights_[element];
}

std::vector<int> SignedMeasure::support(double tol) const {
  std::vector<int> out;
  for (int i = 0; i < weights_.size(); ++i)
    if (std::abs(weights_[i]) > tol) out.push_back(i);
  return out;
}

namespace {

Eigen::VectorXd sanitize_probability_weights(Eigen::VectorXd w, double mass_tol) {
  const double mass = w.sum();
  if (std::abs(mass - 1.0) > mass_tol)
    throw std::invalid_argument("ProbabilityMeasure: total mass must be 1");
  bool clamped = false;
  for (int i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) {
      if (w[i] < -mass_tol)
        throw std::invalid_argument("ProbabilityMeasure: negative weight beyond tolerance");
      w[i] = 0.0;
      clamped = true;
    }
  }
  const double post = clamped ? w.sum() : mass;
  if (post <= 0.0)
    throw std::invalid_argument("ProbabilityMeasure: degenerate mass after clamping");
  w /= post;
  return w;
}

}  // namespace

ProbabilityMeasure::ProbabilityMeasure(GroupSpec group, Eigen::VectorXd weights, double mass_tol)
    : SignedMeasure(std::move(group), std::move(weights)) {
  weights_ = sanitize_probability_weights(std::move(weights_), mass_tol);
}

ProbabilityMeasure::ProbabilityMeasure(const SignedMeasure& m, double mass_tol)
    : ProbabilityMeasure(m.group(), m.weights(), mass_tol) {}

ProbabilityMeasure dirac(const GroupSpec& group, int element) {
  if (element < 0 || element >= group.order())
    throw std::out_of_range("dirac: element index out of range");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(group.order());
  w[element] = 1.0;
  return ProbabilityMeasure(group, std::move(w));
}

ProbabilityMeasure uniform_on(const GroupSpec& group) {
  return ProbabilityMeasure(
      group, Eigen::VectorXd::Constant(group.order(), 1.0 / group.order()));
}

namespace {

void check_same_group(const SignedMeasure& a, const SignedMeasure& b, const char* what) {
  if (a.group() != b.group())
    throw std::invalid_argument(std::string(what) + ": measures live on different groups");
}

Eigen::VectorXd convolve_weights(const SignedMeasure& a, const SignedMeasure& b) {
  const GroupSpec& g = a.group();
  const int n = g.order();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (int h = 0; h < n; ++h) {
    const double bh = b.weights()[h];
    if (bh == 0.0) continue;
    const int hinv = g.inverse(h);
    for (int x = 0; x < n; ++x) out[x] += a.weights()[g.mul(x, hinv)] * bh;
  }
  return out;
}

}  // namespace

SignedMeasure convolve(const SignedMeasure& a, const SignedMeasure& b) {
  check_same_group(a, b, "convolve");
  return SignedMeasure(a.group(), convolve_weights(a, b));
}

ProbabilityMeasure convolve(const ProbabilityMeasure& a, const ProbabilityMeasure& b) {
  check_same_group(a, b, "convolve");
  return ProbabilityMeasure(a.group(), convolve_weights(a, b));
}

double tv_distance(const SignedMeasure& a, const SignedMeasure& b) {
  check_same_group(a, b, "tv_distance");
  return (a.weights() - b.weights()).lpNorm<1>();
}

Eigen::MatrixXd conv_matrix(const SignedMeasure& mu) {
  const GroupSpec& g = mu.group();
  const int n = g.order();
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j) {
    const int jinv = g.inverse(j);
    for (int i = 0; i < n; ++i) m(i, j) = mu.weights()[g.mul(i, jinv)];
  }
  return m;
}

SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b) {
  check_same_group(a, b, "operator+");
  return SignedMeasure(a.group(), a.weights() + b.weights());
}

SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b) {
  check_same_group(a, b, "operator-");
  return SignedMeasure(a.group(), a.weights() - b.weights());
}

SignedMeasure operator*(double c, const SignedMeasure& m) {
  return SignedMeasure(m.group(), c * m.weights());
}

}  // namespace convflow
