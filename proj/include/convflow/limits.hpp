#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "convflow/flow.hpp"
#include "convflow/measure.hpp"

namespace convflow {

// Product sets of the support: sets[m-1] = supp(nu)^m under the group
// operation, recorded through the first repeated set. preperiod counts the
// sets before the cycle; period is the cycle length.
struct ReachSequence {
  std::vector<std::vector<int>> sets;
  int preperiod = 0;
  int period = 0;
};
ReachSequence reach_sets(const ProbabilityMeasure& nu, int m_max = 100000);

// nu is acyclic when some product set of its support equals the whole
// subgroup generated by the support; equivalently the reach cycle has
// period 1. witness_n is the first such power when it exists.
struct AcyclicityReport {
  bool acyclic = false;
  std::optional<int> witness_n;
  int period = 0;
  Subgroup subgroup;
};
AcyclicityReport is_acyclic(const ProbabilityMeasure& nu);

// Subgroup generated by the support of mu.
Subgroup support_subgroup(const ProbabilityMeasure& mu);

// Uniform probability on a subgroup; the idempotents of the algebra.
ProbabilityMeasure haar_on(const Subgroup& h);

// Empirical behavior of the convolution powers nu^n: either a limit
// (acyclic case, the Haar measure of the generated subgroup) or the limit
// cycle of the power subsequences. Throws numerical_error when neither is
// resolved within max_iter.
struct PowerLimitResult {
  std::optional<ProbabilityMeasure> limit;
  std::vector<ProbabilityMeasure> cycle;  // canonical rotation; empty when limit holds
  int steps = 0;
};
PowerLimitResult power_limit_oracle(const ProbabilityMeasure& nu, double tol = 1e-12,
                                    int max_iter = 20000);

// Predicted omega-limit of t -> Q_t(mu) as t -> 1^-. Acyclic mu: the Haar
// measure of the support subgroup. Otherwise: solutions of nu * mu = nu
// inside the convex hull of the power cycle; `predicted` holds the cycle
// average (always a solution) and `ambiguity` spans any residual directions
// of non-uniqueness inside that hull. empirical_distance is the total
// variation between Q_{probe_t}(mu) and the nearest predicted point.
struct LimitReport {
  std::vector<ProbabilityMeasure> predicted;
  Eigen::MatrixXd ambiguity;
  double empirical_distance = 0.0;
  double probe_t = 0.0;
};
inline constexpr double kDefaultProbeT = 1.0 - 1e-6;
LimitReport predict_omega_limit(const ProbabilityMeasure& mu,
                                FlowTime probe_t = FlowTime(kDefaultProbeT));

// A solution set of one linear constraint on measures: the affine system
// constraint * x = rhs. basis spans the homogeneous solutions; canonical is
// a distinguished probability in the set.
struct KernelSpace {
  GroupSpec group;
  Eigen::MatrixXd constraint;
  Eigen::VectorXd rhs;
  Eigen::MatrixXd basis;
  std::optional<ProbabilityMeasure> canonical;

  int dimension() const { return static_cast<int>(basis.cols()); }
  bool contains(const ProbabilityMeasure& nu, double tol = kAlgebraTol) const;
};

// {nu : nu * mu0 = nu}, the fixed measures of convolution by mu0.
KernelSpace cokernel(const ProbabilityMeasure& mu0);

// {mu : nu0 * mu = nu0}, the measures that leave nu0 unchanged. Always
// contains the identity Dirac.
KernelSpace kernel(const ProbabilityMeasure& nu0);

// Fixed points of every Q_t: the Haar measures of the subgroups.
std::vector<ProbabilityMeasure> fixed_points(const GroupSpec& group,
                                             int capacity_bound = kSubgroupEnumerationBound);

// One invariant family per subgroup: the simplex of measures supported on H
// with the Haar measure of H as its internal attractor. Construction
// spot-verifies invariance on random members and checks the restricted
// tangent spectrum at the attractor.
struct BasicSetEntry {
  Subgroup subgroup;
  ProbabilityMeasure attractor;
};
struct BasicSetDecomposition {
  std::vector<BasicSetEntry> entries;
};
BasicSetDecomposition basic_sets(const GroupSpec& group, std::uint64_t seed = 1,
                                 int capacity_bound = kSubgroupEnumerationBound);

// Contraction of the flow toward an idempotent eta along mu, sampled on a
// grid of times: rates are tv(Q_t(mu), eta) / tv(mu, eta). sigma_hat is the
// empirical excess over the model rate 1-t; lambda_bound = sigma_hat +
// (1 - t_max); t0 is the first sampled time with a ratio below one.
struct StableSetReport {
  ProbabilityMeasure eta;
  bool in_kernel = false;
  double initial_distance = 0.0;
  std::vector<std::pair<double, double>> rates;  // (t, ratio), ascending t
  double sigma_hat = 0.0;
  double lambda_bound = 0.0;
  std::optional<double> t0;
};
StableSetReport stable_rate(const ProbabilityMeasure& eta, const ProbabilityMeasure& mu,
                            std::vector<FlowTime> t_grid);

// Solves [(1-t) delta_e + t nu] * x = nu, the preimage equation of the flow
// map. A regular system yields the unique signed solution; a negative weight
// proves nu is not in the image of Q_t. A singular system here is always
// inconsistent (no signed solution at all, which also proves nu is outside
// the image); the reported solution is then taken at the nearest regular
// time solved_at_t, where the blow-up direction carries the negative weight.
struct WitnessReport {
  SignedMeasure solution;
  bool not_in_image = false;
  bool singular = false;
  bool inconsistent = false;
  double requested_t = 0.0;
  double solved_at_t = 0.0;
  double min_weight = 0.0;
  double residual = 0.0;
};
WitnessReport nonsurjectivity_witness(const GroupSpec& group, const ProbabilityMeasure& nu,
                                      FlowTime t);

}  // namespace convflow
