#pragma once

#include <cstddef>
#include <vector>

#include "convflow/flow_time.hpp"
#include "convflow/measure.hpp"

namespace convflow {

// A power series F(x) = sum a_n x^n given by an explicit coefficient prefix
// plus a closed-form tail law for every index past the prefix. The tail law
// supplies the analytic bound on the truncation error, so evaluation never
// needs an ad-hoc iteration cap.
struct PowerSeriesSpec {
  enum class Tail { finite, geometric, exponential };

  std::vector<double> prefix;  // a_0 .. a_{prefix.size()-1}
  Tail tail = Tail::finite;
  double tail_scale = 0.0;  // geometric: a_n = scale * ratio^n; exponential: a_n = scale / n!
  double tail_ratio = 0.0;
  bool normalized = false;  // declares F(1) = 1

  // F_t(x) = (1-t) sum t^n x^n, the normalized geometric kernel.
  static PowerSeriesSpec geometric(double t);
  // e^{x-1}: a_n = (1/e) / n!.
  static PowerSeriesSpec exponential();
  static PowerSeriesSpec finite_series(std::vector<double> coefficients);

  double coefficient(std::size_t n) const;
  // Upper bound on sum_{k >= from} |a_k|; throws std::domain_error when the
  // tail does not converge absolutely.
  double tail_abs_bound(std::size_t from) const;
};

// A polynomial with nonnegative coefficients summing to one, so it maps
// probabilities to probabilities.
class PolynomialSpec {
 public:
  explicit PolynomialSpec(std::vector<double> coefficients);
  const std::vector<double>& coefficients() const { return coefficients_; }
  std::size_t degree() const { return coefficients_.size() - 1; }

 private:
  std::vector<double> coefficients_;
};

// (1 - t mu)^{-1} in the measure algebra, for t in [0,1). Computed two ways:
// a linear solve of (I - t M(mu)) x = delta_e and the truncated geometric
// series with tail bound t^(K+1)/(1-t); the routes must agree within
// kAlgebraTol or the call fails.
SignedMeasure neumann_inverse(const ProbabilityMeasure& mu, FlowTime t);

// F(mu) = sum a_n mu^n, truncated where the tail bound drops below
// kAlgebraTol. When F(1) = 1 with nonnegative coefficients the result is a
// probability vector up to that tolerance.
SignedMeasure evaluate_series(const PowerSeriesSpec& f, const ProbabilityMeasure& mu);

ProbabilityMeasure evaluate_polynomial(const PolynomialSpec& s, const ProbabilityMeasure& mu);

// (1-t) S1(mu) * (1 - t S2(mu))^{-1}: the rational expression behind the
// flow map, with polynomial numerator and denominator data.
ProbabilityMeasure rational_map(const PolynomialSpec& s1, const PolynomialSpec& s2,
                                FlowTime t, const ProbabilityMeasure& mu);

}  // namespace convflow
