#include "convflow/json_io.hpp"

#include <stdexcept>

namespace convflow {

namespace {

json residues_to_json(const GroupSpec& g, int index) {
  return json(g.residues(index));
}

json weights_to_json(const Eigen::VectorXd& w) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < w.size(); ++i) arr.push_back(w[i]);
  return arr;
}

Eigen::VectorXd weights_from_json(const json& j, int expected_size) {
  if (!j.is_array()) throw std::invalid_argument("weights must be an array");
  if (static_cast<int>(j.size()) != expected_size) {
    throw std::invalid_argument("weights length does not match group order");
  }
  Eigen::VectorXd w(expected_size);
  for (int i = 0; i < expected_size; ++i) w[i] = j.at(i).get<double>();
  return w;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

json group_to_json(const GroupSpec& g) {
  return json{{"cyclic", g.cyclic_orders()}};
}

GroupSpec group_from_json(const json& j) {
  if (!j.is_object() || !j.contains("cyclic")) {
    throw std::invalid_argument("group json must be {\"cyclic\": [...]}");
  }
  return GroupSpec(j.at("cyclic").get<std::vector<int>>());
}

json measure_to_json(const SignedMeasure& m) {
  return json{{"group", group_to_json(m.group())}, {"weights", weights_to_json(m.weights())}};
}

SignedMeasure measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("group") || !j.contains("weights")) {
    throw std::invalid_argument("measure json must carry group and weights");
  }
  GroupSpec g = group_from_json(j.at("group"));
  Eigen::VectorXd w = weights_from_json(j.at("weights"), g.order());
  return SignedMeasure(std::move(g), std::move(w));
}

ProbabilityMeasure probability_from_json(const json& j) {
  SignedMeasure m = measure_from_json(j);
  return ProbabilityMeasure(m.group(), m.weights());
}

json subgroup_to_json(const Subgroup& h) {
  json elems = json::array();
  for (int e : h.elements()) elems.push_back(residues_to_json(h.group(), e));
  return json{{"group", group_to_json(h.group())}, {"order", h.order()}, {"elements", elems}};
}

json reach_to_json(const GroupSpec& g, const ReachSequence& r) {
  json sets = json::array();
  for (const auto& s : r.sets) {
    json one = json::array();
    for (int e : s) one.push_back(residues_to_json(g, e));
    sets.push_back(std::move(one));
  }
  return json{{"sets", std::move(sets)}, {"preperiod", r.preperiod}, {"period", r.period}};
}

json acyclicity_to_json(const AcyclicityReport& r) {
  json j{{"acyclic", r.acyclic},
         {"period", r.period},
         {"support_subgroup", subgroup_to_json(r.subgroup)}};
  if (r.witness_n) {
    j["witness_n"] = *r.witness_n;
  } else {
    j["witness_n"] = nullptr;
  }
  return j;
}

json limit_report_to_json(const ProbabilityMeasure& mu, const LimitReport& r) {
  json predicted = json::array();
  for (const auto& p : r.predicted) predicted.push_back(measure_to_json(p));
  return json{{"mu", measure_to_json(mu)},
              {"predicted", std::move(predicted)},
              {"ambiguity_dimension", static_cast<int>(r.ambiguity.cols())},
              {"ambiguity_basis", matrix_to_json(r.ambiguity)},
              {"empirical_distance", r.empirical_distance},
              {"probe_t", r.probe_t}};
}

json kernel_space_to_json(const KernelSpace& k) {
  json basis = json::array();
  for (Eigen::Index c = 0; c < k.basis.cols(); ++c) {
    basis.push_back(weights_to_json(k.basis.col(c)));
  }
  json j{{"group", group_to_json(k.group)},
         {"dimension", k.dimension()},
         {"basis", std::move(basis)}};
  if (k.canonical) {
    j["canonical"] = measure_to_json(*k.canonical);
  } else {
    j["canonical"] = nullptr;
  }
  return j;
}

json basic_sets_to_json(const GroupSpec& g, const BasicSetDecomposition& d) {
  json entries = json::array();
  for (const auto& e : d.entries) {
    entries.push_back(json{{"subgroup", subgroup_to_json(e.subgroup)},
                           {"attractor", measure_to_json(e.attractor)}});
  }
  return json{{"group", group_to_json(g)},
              {"count", static_cast<int>(d.entries.size())},
              {"entries", std::move(entries)}};
}

json fixed_points_to_json(const GroupSpec& g, const std::vector<ProbabilityMeasure>& pts) {
  json arr = json::array();
  for (const auto& p : pts) arr.push_back(measure_to_json(p));
  return json{{"group", group_to_json(g)},
              {"count", static_cast<int>(pts.size())},
              {"fixed_points", std::move(arr)}};
}

json jacobian_to_json(double t, const ProbabilityMeasure& mu, const DifferentialOperator& d,
                      const std::vector<std::complex<double>>& spectrum) {
  json spec = json::array();
  for (const auto& z : spectrum) {
    spec.push_back(json{{"re", z.real()}, {"im", z.imag()}});
  }
  return json{{"t", t},
              {"mu", measure_to_json(mu)},
              {"symbol", measure_to_json(d.symbol)},
              {"matrix", matrix_to_json(d.matrix)},
              {"tangent_spectrum", std::move(spec)}};
}

json stable_report_to_json(const StableSetReport& r) {
  json rates = json::array();
  for (const auto& [t, ratio] : r.rates) {
    rates.push_back(json{{"t", t}, {"ratio", ratio}});
  }
  json j{{"eta", measure_to_json(r.eta)},
         {"in_kernel", r.in_kernel},
         {"initial_distance", r.initial_distance},
         {"rates", std::move(rates)},
         {"sigma_hat", r.sigma_hat},
         {"lambda_bound", r.lambda_bound}};
  if (r.t0) {
    j["t0"] = *r.t0;
  } else {
    j["t0"] = nullptr;
  }
  return j;
}

json witness_to_json(const ProbabilityMeasure& nu, const WitnessReport& r) {
  return json{{"nu", measure_to_json(nu)},
              {"requested_t", r.requested_t},
              {"solved_at_t", r.solved_at_t},
              {"singular", r.singular},
              {"inconsistent", r.inconsistent},
              {"not_in_image", r.not_in_image},
              {"min_weight", r.min_weight},
              {"residual", r.residual},
              {"solution", measure_to_json(r.solution)}};
}

}  // namespace convflow
