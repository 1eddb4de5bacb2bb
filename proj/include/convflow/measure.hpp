#pragma once

#include <Eigen/Dense>
#include <vector>

#include "convflow/group.hpp"

namespace convflow {

// Tolerances used across the algebra. Mass: probability construction slack.
// Algebra: identity checks between independently computed quantities.
// Support: weight threshold below which an atom does not count as support.
inline constexpr double kMassTol = 1e-12;
inline constexpr double kAlgebraTol = 1e-10;
inline constexpr double kSupportTol = 1e-12;

// A finitely supported real measure: one weight per group element.
class SignedMeasure {
 public:
  SignedMeasure(GroupSpec group, Eigen::VectorXd weights);

  const GroupSpec& group() const { return group_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  double weight(int element) const;
  double total_mass() const { return weights_.sum(); }

  // Elements carrying |weight| > tol.
  std::vector<int> support(double tol = kSupportTol) const;

 protected:
  GroupSpec group_;
  Eigen::VectorXd weights_;
};

// A probability: nonnegative weights of total mass one. Weights in
// [-mass_tol, 0) are treated as roundoff, clamped to zero, and the vector is
// renormalized; anything more negative, or a mass off one by more than
// mass_tol, rejects construction.
class ProbabilityMeasure : public SignedMeasure {
 public:
  ProbabilityMeasure(GroupSpec group, Eigen::VectorXd weights, double mass_tol = kMassTol);
  explicit ProbabilityMeasure(const SignedMeasure& m, double mass_tol = kMassTol);
};

ProbabilityMeasure dirac(const GroupSpec& group, int element);
ProbabilityMeasure uniform_on(const GroupSpec& group);

// (a*b)(g) = sum_h a(g h^-1) b(h). Throws std::invalid_argument on a group
// mismatch. Total mass multiplies; probabilities convolve to probabilities.
SignedMeasure convolve(const SignedMeasure& a, const SignedMeasure& b);
ProbabilityMeasure convolve(const ProbabilityMeasure& a, const ProbabilityMeasure& b);

// Total variation distance, here the plain l1 norm sum_g |a(g) - b(g)|
// (so tv between distinct Dirac measures is 2).
double tv_distance(const SignedMeasure& a, const SignedMeasure& b);

// Matrix of convolution by mu: M(i,j) = mu(g_i g_j^-1), so M * vec(nu)
// = vec(mu * nu). Columns sum to the total mass of mu, and
// conv_matrix(a*b) = conv_matrix(a) * conv_matrix(b).
Eigen::MatrixXd conv_matrix(const SignedMeasure& mu);

// Vector-space operations on measures over the same group.
SignedMeasure operator+(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure operator-(const SignedMeasure& a, const SignedMeasure& b);
SignedMeasure operator*(double c, const SignedMeasure& m);

}  // namespace convflow
