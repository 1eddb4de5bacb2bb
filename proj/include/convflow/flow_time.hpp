#pragma once

#include <cmath>
#include <stdexcept>

namespace convflow {

// Flow-time parameter t in [0,1). The extended variant admits t = 1, the
// limit time; maps that invert (1 - t mu) reject it.
class FlowTime {
 public:
  explicit FlowTime(double t) : t_(t) {
    if (!(t >= 0.0 && t < 1.0))
      throw std::domain_error("FlowTime: t must lie in [0,1)");
  }

  static FlowTime extended(double t) {
    if (!(t >= 0.0 && t <= 1.0))
      throw std::domain_error("FlowTime: extended t must lie in [0,1]");
    FlowTime ft;
    ft.t_ = t;
    return ft;
  }

  double value() const { return t_; }
  double complement() const { return 1.0 - t_; }
  bool is_limit() const { return t_ == 1.0; }

 private:
  FlowTime() : t_(0.0) {}
  double t_;
};

// t1 (+) t2 = 1 - (1-t1)(1-t2). Associative and commutative with unit 0;
// t (+) 1 = 1. Computed through complements, which multiply exactly.
inline FlowTime delta_compose(FlowTime a, FlowTime b) {
  return FlowTime::extended(1.0 - a.complement() * b.complement());
}

// n-fold composition: 1 - (1-t)^n, with n = 0 giving time 0.
inline FlowTime delta_power(FlowTime t, int n) {
  if (n < 0) throw std::domain_error("delta_power: n must be >= 0");
  return FlowTime::extended(1.0 - std::pow(t.complement(), n));
}

}  // namespace convflow
