#include "convflow/limits.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <stdexcept>

#include "convflow/errors.hpp"

namespace convflow {

ReachSequence reach_sets(const ProbabilityMeasure& nu, int m_max) {
  if (m_max < 1) throw std::invalid_argument("reach_sets: m_max must be >= 1");
  const GroupSpec& g = nu.group();
  const std::vector<int> supp = nu.support();
  if (supp.empty())
    throw std::invalid_argument("reach_sets: measure has empty support");

  ReachSequence out;
  std::map<std::vector<int>, int> first_seen;  // set -> 1-based index m
  std::vector<int> current = supp;
  for (int m = 1; m <= m_max; ++m) {
    auto it = first_seen.find(current);
    if (it != first_seen.end()) {
      out.preperiod = it->second - 1;
      out.period = m - it->second;
      return out;
    }
    first_seen.emplace(current, m);
    out.sets.push_back(current);

    std::vector<char> next_mask(g.order(), 0);
    for (int a : current)
      for (int s : supp) next_mask[g.mul(a, s)] = 1;
    std::vector<int> next;
    for (int e = 0; e < g.order(); ++e)
      if (next_mask[e]) next.push_back(e);
    current = std::move(next);
  }
  throw numerical_error("reach_sets: no repeated set within m_max");
}

AcyclicityReport is_acyclic(const ProbabilityMeasure& nu) {
  const ReachSequence seq = reach_sets(nu);
  Subgroup h = support_subgroup(nu);
  AcyclicityReport report{false, std::nullopt, seq.period, std::move(h)};
  if (seq.period == 1 && seq.sets[seq.preperiod] == report.subgroup.elements()) {
    report.acyclic = true;
    for (std::size_t i = 0; i < seq.sets.size(); ++i) {
      if (seq.sets[i] == report.subgroup.elements()) {
        report.witness_n = static_cast<int>(i) + 1;
        break;
      }
    }
  }
  return report;
}

Subgroup support_subgroup(const ProbabilityMeasure& mu) {
  const std::vector<int> supp = mu.support();
  if (supp.empty())
    throw std::invalid_argument("support_subgroup: measure has empty support");
  return generated_subgroup(mu.group(), supp);
}

ProbabilityMeasure haar_on(const Subgroup& h) {
  Eigen::VectorXd w = Eigen::VectorXd::Zero(h.group().order());
  const double mass = 1.0 / h.order();
  for (int e : h.elements()) w[e] = mass;
  return ProbabilityMeasure(h.group(), std::move(w));
}

PowerLimitResult power_limit_oracle(const ProbabilityMeasure& nu, double tol, int max_iter) {
  const GroupSpec& g = nu.group();
  const int n = g.order();
  const Eigen::MatrixXd m = conv_matrix(nu);

  // Power cycles on a group of order n have period at most n, so a window of
  // n+1 iterates suffices for detection. A candidate period is confirmed by
  // holding for one more full cycle.
  const int max_period = n;
  std::deque<Eigen::VectorXd> window;
  window.push_back(nu.weights());

  // Long matrix-power chains accumulate mass drift of order steps * eps, so
  // the reconstructed probabilities get a matching construction slack.
  constexpr double kIterateSlack = 1e-8;

  auto make_result = [&](int steps, int period,
                         const std::deque<Eigen::VectorXd>& win) -> PowerLimitResult {
    PowerLimitResult result;
    result.steps = steps;
    // True power cycles walk distinct cosets, so distinct cycle points sit at
    // l1 distance 2. A slowly rotating transient can match at period p before
    // it matches at period 1; reduce to the smallest shift at the coset scale,
    // where a reduction to 1 identifies the match as plain convergence.
    if (period > 1) {
      std::vector<Eigen::VectorXd> tail(win.end() - period, win.end());
      for (int d = 1; d < period; ++d) {
        if (period % d != 0) continue;
        bool matches = true;
        for (int i = 0; matches && i < period; ++i)
          matches = (tail[i] - tail[(i + d) % period]).lpNorm<1>() < 1.0;
        if (matches) {
          period = d;
          break;
        }
      }
    }
    if (period == 1) {
      result.limit = ProbabilityMeasure(g, win.back(), kIterateSlack);
      return result;
    }
    std::vector<Eigen::VectorXd> cycle(win.end() - period, win.end());
    // canonical rotation: lexicographically smallest weight vector first
    int start = 0;
    for (int i = 1; i < period; ++i) {
      for (int k = 0; k < n; ++k) {
        const double d = cycle[i][k] - cycle[start][k];
        if (d < -1e-15) { start = i; break; }
        if (d > 1e-15) break;
      }
    }
    for (int i = 0; i < period; ++i)
      result.cycle.emplace_back(g, cycle[(start + i) % period], kIterateSlack);
    return result;
  };

  int pending_period = 0;
  int confirm_left = 0;
  for (int step = 2; step <= max_iter; ++step) {
    window.push_back(m * window.back());
    if (static_cast<int>(window.size()) > max_period + 1) window.pop_front();

    if (pending_period > 0) {
      const Eigen::VectorXd& latest = window.back();
      const Eigen::VectorXd& before = window[window.size() - 1 - pending_period];
      if ((latest - before).lpNorm<1>() <= tol) {
        if (--confirm_left == 0) return make_result(step, pending_period, window);
        continue;
      }
      pending_period = 0;  // confirmation failed; resume scanning
    }
    for (int p = 1; p <= std::min<int>(max_period, window.size() - 1); ++p) {
      const Eigen::VectorXd& latest = window.back();
      const Eigen::VectorXd& before = window[window.size() - 1 - p];
      if ((latest - before).lpNorm<1>() <= tol) {
        if (p == 1) return make_result(step, 1, window);
        pending_period = p;
        confirm_left = p;
        break;
      }
    }
  }
  throw numerical_error("power_limit_oracle: inconclusive within max_iter");
}

LimitReport predict_omega_limit(const ProbabilityMeasure& mu, FlowTime probe_t) {
  const GroupSpec& g = mu.group();
  const int n = g.order();
  LimitReport report;
  report.probe_t = probe_t.value();
  report.ambiguity = Eigen::MatrixXd(n, 0);

  const AcyclicityReport acyclic = is_acyclic(mu);
  if (acyclic.acyclic) {
    report.predicted.push_back(haar_on(acyclic.subgroup));
  } else {
    // Solutions of nu * mu = nu restricted to the hull of the power cycle:
    // parameterize nu = C alpha over the cycle points and solve
    // (M(mu) - I) C alpha = 0 on the affine slice sum(alpha) = 1. The
    // uniform alpha always solves (the cycle telescopes), giving the cycle
    // average as the canonical prediction.
    PowerLimitResult powers = power_limit_oracle(mu);
    std::vector<ProbabilityMeasure> cycle = powers.cycle;
    if (cycle.empty() && powers.limit) cycle.push_back(*powers.limit);
    const int p = static_cast<int>(cycle.size());
    Eigen::MatrixXd c(n, p);
    for (int j = 0; j < p; ++j) c.col(j) = cycle[j].weights();

    Eigen::MatrixXd k = (conv_matrix(mu) - Eigen::MatrixXd::Identity(n, n)) * c;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(k);
    lu.setThreshold(1e-8);
    const Eigen::VectorXd alpha0 = Eigen::VectorXd::Constant(p, 1.0 / p);
    report.predicted.emplace_back(g, c * alpha0, 1e-8);

    if (lu.dimensionOfKernel() > 0) {
      const Eigen::MatrixXd null_basis = lu.kernel();
      std::vector<Eigen::VectorXd> directions;
      for (int j = 0; j < null_basis.cols(); ++j) {
        Eigen::VectorXd v = null_basis.col(j);
        v -= v.sum() * alpha0;  // project onto the sum-zero slice
        Eigen::VectorXd dir = c * v;
        if (dir.lpNorm<1>() > 1e-8) directions.push_back(dir);
      }
      if (!directions.empty()) {
        Eigen::MatrixXd d(n, static_cast<int>(directions.size()));
        for (std::size_t j = 0; j < directions.size(); ++j) d.col(j) = directions[j];
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(d);
        qr.setThreshold(1e-8);
        const int rank = static_cast<int>(qr.rank());
        Eigen::MatrixXd q = qr.householderQ();
        report.ambiguity = q.leftCols(rank);
      }
    }
  }

  for (const ProbabilityMeasure& nu : report.predicted) {
    if (tv_distance(convolve(nu, mu), nu) > kAlgebraTol)
      throw numerical_error("predict_omega_limit: predicted point is not invariant");
  }

  const ProbabilityMeasure probe = q_map(probe_t, mu);
  double best = tv_distance(probe, report.predicted.front());
  for (std::size_t i = 1; i < report.predicted.size(); ++i)
    best = std::min(best, tv_distance(probe, report.predicted[i]));
  report.empirical_distance = best;
  return report;
}

bool KernelSpace::contains(const ProbabilityMeasure& nu, double tol) const {
  if (nu.group() != group) return false;
  return (constraint * nu.weights() - rhs).lpNorm<1>() <= tol;
}

namespace {

Eigen::MatrixXd null_space_of(const Eigen::MatrixXd& a) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  lu.setThreshold(1e-10);
  if (lu.dimensionOfKernel() == 0) return Eigen::MatrixXd(a.cols(), 0);
  Eigen::MatrixXd basis = lu.kernel();
  for (int j = 0; j < basis.cols(); ++j) basis.col(j).normalize();
  return basis;
}

}  // namespace

KernelSpace cokernel(const ProbabilityMeasure& mu0) {
  const int n = mu0.group().order();
  Eigen::MatrixXd a = conv_matrix(mu0) - Eigen::MatrixXd::Identity(n, n);
  KernelSpace space{mu0.group(), a, Eigen::VectorXd::Zero(n), null_space_of(a),
                    haar_on(support_subgroup(mu0))};
  return space;
}

KernelSpace kernel(const ProbabilityMeasure& nu0) {
  Eigen::MatrixXd a = conv_matrix(nu0);
  // delta_e solves nu0 * x = nu0 exactly, so the set is never empty.
  KernelSpace space{nu0.group(), a, nu0.weights(), null_space_of(a),
                    dirac(nu0.group(), GroupSpec::identity)};
  return space;
}

std::vector<ProbabilityMeasure> fixed_points(const GroupSpec& group, int capacity_bound) {
  std::vector<ProbabilityMeasure> out;
  for (const Subgroup& h : enumerate_subgroups(group, capacity_bound)) {
    ProbabilityMeasure eta = haar_on(h);
    if (tv_distance(convolve(eta, eta), eta) > kAlgebraTol)
      throw numerical_error("fixed_points: Haar measure failed the idempotent check");
    out.push_back(std::move(eta));
  }
  return out;
}

namespace {

ProbabilityMeasure random_probability_on(const GroupSpec& g, const std::vector<int>& support,
                                         std::mt19937_64& rng) {
  std::exponential_distribution<double> exp1(1.0);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(g.order());
  double total = 0.0;
  for (int e : support) {
    w[e] = exp1(rng) + 1e-3;
    total += w[e];
  }
  w /= total;
  return ProbabilityMeasure(g, std::move(w));
}

}  // namespace

BasicSetDecomposition basic_sets(const GroupSpec& group, std::uint64_t seed,
                                 int capacity_bound) {
  BasicSetDecomposition decomposition;
  std::mt19937_64 rng(seed);
  const FlowTime t_check(0.5);

  for (const Subgroup& h : enumerate_subgroups(group, capacity_bound)) {
    ProbabilityMeasure eta = haar_on(h);

    // invariance of the H-supported simplex, spot-checked on random members
    for (int trial = 0; trial < 3; ++trial) {
      const ProbabilityMeasure nu = random_probability_on(group, h.elements(), rng);
      const ProbabilityMeasure image = q_map(t_check, nu);
      for (int e = 0; e < group.order(); ++e) {
        if (!h.contains(e) && image.weights()[e] > kSupportTol)
          throw numerical_error("basic_sets: flow left the subgroup simplex");
      }
    }

    // attraction inside the simplex: the differential at the Haar point,
    // restricted to the H-coordinates and their sum-zero tangent, must have
    // every eigenvalue at the model value 1 - t
    if (h.order() > 1) {
      const DifferentialOperator d = differential(t_check, eta);
      const int k = h.order();
      Eigen::MatrixXd sub(k, k);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j)
          sub(i, j) = d.matrix(h.elements()[i], h.elements()[j]);
      const Eigen::MatrixXd b = tangent_basis(k);
      const Eigen::MatrixXd restricted = b.transpose() * sub * b;
      Eigen::EigenSolver<Eigen::MatrixXd> es(restricted);
      if (es.info() != Eigen::Success)
        throw numerical_error("basic_sets: restricted eigenvalue iteration failed");
      for (int i = 0; i < k - 1; ++i) {
        if (std::abs(es.eigenvalues()[i] - std::complex<double>(t_check.complement(), 0.0)) >
            1e-8)
          throw numerical_error("basic_sets: attractor spectrum off the model value");
      }
    }

    decomposition.entries.push_back(BasicSetEntry{h, std::move(eta)});
  }
  return decomposition;
}

StableSetReport stable_rate(const ProbabilityMeasure& eta, const ProbabilityMeasure& mu,
                            std::vector<FlowTime> t_grid) {
  if (eta.group() != mu.group())
    throw std::invalid_argument("stable_rate: measures live on different groups");
  if (tv_distance(convolve(eta, eta), eta) > kAlgebraTol)
    throw std::domain_error("stable_rate: eta must be idempotent");
  if (t_grid.empty()) throw std::invalid_argument("stable_rate: empty time grid");
  std::sort(t_grid.begin(), t_grid.end(),
            [](FlowTime a, FlowTime b) { return a.value() < b.value(); });

  StableSetReport report{eta, false, 0.0, {}, 0.0, 0.0, {}};
  report.in_kernel = tv_distance(convolve(eta, mu), eta) <= kAlgebraTol;
  report.initial_distance = tv_distance(mu, eta);
  if (report.initial_distance <= kSupportTol) return report;  // ratios undefined at eta

  for (FlowTime t : t_grid) {
    if (t.is_limit()) throw std::domain_error("stable_rate: t = 1 is outside the flow domain");
    const double ratio = tv_distance(q_map(t, mu), eta) / report.initial_distance;
    report.rates.emplace_back(t.value(), ratio);
    report.sigma_hat = std::max(report.sigma_hat, ratio - t.complement());
    if (!report.t0 && ratio < 1.0) report.t0 = t.value();
  }
  report.lambda_bound = report.sigma_hat + (1.0 - report.rates.back().first);
  return report;
}

WitnessReport nonsurjectivity_witness(const GroupSpec& group, const ProbabilityMeasure& nu,
                                      FlowTime t) {
  if (nu.group() != group)
    throw std::invalid_argument("nonsurjectivity_witness: measure group mismatch");
  if (t.value() <= 0.0 || t.value() >= 1.0)
    throw std::domain_error("nonsurjectivity_witness: t must lie in (0,1)");
  const int n = group.order();
  const Eigen::MatrixXd m = conv_matrix(nu);
  const Eigen::VectorXd b = nu.weights();

  auto system_at = [&](double tv_) {
    return Eigen::MatrixXd((1.0 - tv_) * Eigen::MatrixXd::Identity(n, n) + tv_ * m);
  };

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(system_at(t.value()));
  WitnessReport report{SignedMeasure(group, Eigen::VectorXd::Zero(n))};
  report.requested_t = t.value();
  report.solved_at_t = t.value();

  if (cod.rank() == n) {
    Eigen::VectorXd x = cod.solve(b);
    if (!x.allFinite()) throw numerical_error("nonsurjectivity_witness: solve failed");
    report.residual = (system_at(t.value()) * x - b).lpNorm<1>();
    report.min_weight = x.minCoeff();
    report.not_in_image = report.min_weight < -kMassTol;
    report.solution = SignedMeasure(group, std::move(x));
    return report;
  }

  report.singular = true;
  Eigen::VectorXd least_squares = cod.solve(b);
  report.residual = (system_at(t.value()) * least_squares - b).lpNorm<1>();
  report.inconsistent = report.residual > 1e-8;

  if (!report.inconsistent) {
    // Rank-deficient but solvable: report the minimum-norm member of the
    // solution family. On an abelian group this branch is unreachable (a
    // singular direction is a character with pairing -(1-t)/t against nu,
    // never zero), but it keeps the contract total.
    report.min_weight = least_squares.minCoeff();
    report.not_in_image = report.min_weight < -kMassTol;
    report.solution = SignedMeasure(group, std::move(least_squares));
    return report;
  }

  // Inconsistent: no signed solution exists at t, which already places nu
  // outside the image. The signed witness is read off at the nearest regular
  // time, where the solution family blows up with a strictly negative entry.
  report.not_in_image = true;
  for (double h = 1e-6; h <= 0.25; h *= 2.0) {
    for (double candidate : {t.value() + h, t.value() - h}) {
      if (!(candidate > 0.0 && candidate < 1.0)) continue;
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> near(system_at(candidate));
      if (near.rank() < n) continue;
      Eigen::VectorXd x = near.solve(b);
      if (!x.allFinite()) continue;
      report.solved_at_t = candidate;
      report.min_weight = x.minCoeff();
      report.solution = SignedMeasure(group, std::move(x));
      return report;
    }
  }
  throw numerical_error("nonsurjectivity_witness: no regular time found near t");
}

}  // namespace convflow
