#include "convflow/series.hpp"

#include <cmath>
#include <stdexcept>

#include "convflow/errors.hpp"

namespace convflow {

PowerSeriesSpec PowerSeriesSpec::geometric(double t) {
  if (!(t >= 0.0 && t < 1.0))
    throw std::domain_error("PowerSeriesSpec::geometric: t must lie in [0,1)");
  PowerSeriesSpec f;
  f.tail = Tail::geometric;
  f.tail_scale = 1.0 - t;
  f.tail_ratio = t;
  f.normalized = true;
  return f;
}

PowerSeriesSpec PowerSeriesSpec::exponential() {
  PowerSeriesSpec f;
  f.tail = Tail::exponential;
  f.tail_scale = std::exp(-1.0);
  f.normalized = true;
  return f;
}

PowerSeriesSpec PowerSeriesSpec::finite_series(std::vector<double> coefficients) {
  PowerSeriesSpec f;
  f.prefix = std::move(coefficients);
  f.tail = Tail::finite;
  return f;
}

namespace {

double factorial(std::size_t n) {
  double out = 1.0;
  for (std::size_t k = 2; k <= n; ++k) out *= static_cast<double>(k);
  return out;
}

}  // namespace

double PowerSeriesSpec::coefficient(std::size_t n) const {
  if (n < prefix.size()) return prefix[n];
  switch (tail) {
    case Tail::finite:
      return 0.0;
    case Tail::geometric:
      return tail_scale * std::pow(tail_ratio, static_cast<double>(n));
    case Tail::exponential:
      return tail_scale / factorial(n);
  }
  return 0.0;
}

double PowerSeriesSpec::tail_abs_bound(std::size_t from) const {
  double bound = 0.0;
  for (std::size_t n = from; n < prefix.size(); ++n) bound += std::abs(prefix[n]);
  const std::size_t start = std::max(from, prefix.size());
  switch (tail) {
    case Tail::finite:
      return bound;
    case Tail::geometric: {
      const double r = std::abs(tail_ratio);
      if (r >= 1.0)
        throw std::domain_error("PowerSeriesSpec: geometric tail with |ratio| >= 1 diverges");
      return bound + std::abs(tail_scale) * std::pow(r, static_cast<double>(start)) / (1.0 - r);
    }
    case Tail::exponential:
      // sum_{k >= n} 1/k! <= 2/n! for n >= 1
      return bound + std::abs(tail_scale) * (start == 0 ? std::exp(1.0) : 2.0 / factorial(start));
  }
  return bound;
}

PolynomialSpec::PolynomialSpec(std::vector<double> coefficients)
    : coefficients_(std::move(coefficients)) {
  if (coefficients_.empty())
    throw std::invalid_argument("PolynomialSpec: coefficient list must be nonempty");
  double sum = 0.0;
  for (double a : coefficients_) {
    if (!(a >= 0.0))
      throw std::invalid_argument("PolynomialSpec: coefficients must be nonnegative");
    sum += a;
  }
  if (std::abs(sum - 1.0) > kMassTol)
    throw std::invalid_argument("PolynomialSpec: coefficients must sum to 1");
}

namespace {

// Truncated geometric series sum_{k=0}^{2^m - 1} (t mu)^k, evaluated by the
// doubling identity S_{m+1} = S_m + P_m * S_m with P_{m+1} = P_m * P_m and
// P_0 = t mu. The truncation order 2^m is driven by the analytic tail bound
// t^{2^m} / (1-t) < eps, never by a fixed iteration cap.
Eigen::VectorXd truncated_neumann_series(const ProbabilityMeasure& mu, double t, double eps) {
  const GroupSpec& g = mu.group();
  const int n = g.order();
  Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
  s[GroupSpec::identity] = 1.0;
  if (t == 0.0) return s;

  SignedMeasure p = t * SignedMeasure(g, mu.weights());
  SignedMeasure acc(g, s);
  const double one_minus_t = 1.0 - t;
  for (int m = 0; m < 64; ++m) {
    if (p.total_mass() / one_minus_t < eps) return acc.weights();
    acc = acc + convolve(p, acc);
    p = convolve(p, p);
  }
  throw numerical_error("neumann_inverse: series tail bound not reached");
}

}  // namespace

SignedMeasure neumann_inverse(const ProbabilityMeasure& mu, FlowTime t) {
  if (t.is_limit())
    throw std::domain_error("neumann_inverse: t = 1 is outside the invertible range");
  const GroupSpec& g = mu.group();
  const int n = g.order();

  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - t.value() * conv_matrix(mu);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
  e[GroupSpec::identity] = 1.0;
  Eigen::VectorXd solved = a.partialPivLu().solve(e);
  if (!solved.allFinite())
    throw numerical_error("neumann_inverse: linear solve failed");

  const Eigen::VectorXd series = truncated_neumann_series(mu, t.value(), kAlgebraTol / 2.0);
  if ((solved - series).lpNorm<1>() > kAlgebraTol)
    throw numerical_error("neumann_inverse: solve and series routes disagree");

  return SignedMeasure(g, solved);
}

SignedMeasure evaluate_series(const PowerSeriesSpec& f, const ProbabilityMeasure& mu) {
  const GroupSpec& g = mu.group();

  // Probability powers have unit total variation, so the truncation error is
  // bounded by the surviving coefficient tail.
  std::size_t terms = f.prefix.size();
  while (f.tail_abs_bound(terms) >= kAlgebraTol / 2.0) {
    ++terms;
    if (terms > (1u << 25))
      throw numerical_error("evaluate_series: tail bound needs too many terms");
  }

  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.order());
  acc[GroupSpec::identity] = f.coefficient(0);
  if (terms > 1) {
    ProbabilityMeasure power = mu;
    acc += f.coefficient(1) * power.weights();
    for (std::size_t k = 2; k < terms; ++k) {
      power = convolve(power, mu);
      const double a = f.coefficient(k);
      if (a != 0.0) acc += a * power.weights();
    }
  }
  return SignedMeasure(g, acc);
}

ProbabilityMeasure evaluate_polynomial(const PolynomialSpec& s, const ProbabilityMeasure& mu) {
  const GroupSpec& g = mu.group();
  const auto& a = s.coefficients();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(g.order());
  acc[GroupSpec::identity] = a[0];
  if (a.size() > 1) {
    ProbabilityMeasure power = mu;
    acc += a[1] * power.weights();
    for (std::size_t k = 2; k < a.size(); ++k) {
      power = convolve(power, mu);
      if (a[k] != 0.0) acc += a[k] * power.weights();
    }
  }
  return ProbabilityMeasure(g, std::move(acc));
}

ProbabilityMeasure rational_map(const PolynomialSpec& s1, const PolynomialSpec& s2,
                                FlowTime t, const ProbabilityMeasure& mu) {
  if (t.is_limit())
    throw std::domain_error("rational_map: t = 1 is outside the invertible range");
  const ProbabilityMeasure num = evaluate_polynomial(s1, mu);
  const ProbabilityMeasure den = evaluate_polynomial(s2, mu);
  const SignedMeasure inv = neumann_inverse(den, t);
  SignedMeasure raw = t.complement() * convolve(SignedMeasure(num.group(), num.weights()), inv);
  // The exact value is a probability; sub-tolerance negatives are roundoff.
  return ProbabilityMeasure(raw.group(), raw.weights(),
                            std::max(kMassTol, 1e-12 / t.complement()));
}

}  // namespace convflow
