// convflow: command-line front end for the convolution flow library.
// Subcommands: `evolve` writes orbit trajectories, `report` writes analysis
// documents. Data goes to stdout or --out; diagnostics go to stderr.
// Exit codes: 0 success, 2 input error, 3 capacity, 4 numerical failure.

#include <CLI11.hpp>
#include <Eigen/Dense>
#include <fstream>
#include <future>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "convflow/errors.hpp"
#include "convflow/flow.hpp"
#include "convflow/flow_time.hpp"
#include "convflow/group.hpp"
#include "convflow/json_io.hpp"
#include "convflow/limits.hpp"
#include "convflow/measure.hpp"

namespace {

using convflow::json;

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = std::stod(item, &used);
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw std::invalid_argument("malformed number: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty numeric list");
  return out;
}

convflow::GroupSpec parse_group(const std::string& text) {
  std::vector<int> orders;
  for (double v : parse_double_list(text)) {
    int n = static_cast<int>(v);
    if (static_cast<double>(n) != v) throw std::invalid_argument("group orders must be integers");
    orders.push_back(n);
  }
  return convflow::GroupSpec(orders);
}

// --mu accepts inline comma-separated weights or a path to a measure JSON.
convflow::ProbabilityMeasure parse_measure(const convflow::GroupSpec& group,
                                           const std::string& text) {
  if (std::ifstream in(text); in.good()) {
    json doc = json::parse(in);
    convflow::ProbabilityMeasure mu = convflow::probability_from_json(doc);
    if (mu.group() != group) throw std::invalid_argument("measure file group differs from --group");
    return mu;
  }
  std::vector<double> w = parse_double_list(text);
  if (static_cast<int>(w.size()) != group.order()) {
    throw std::invalid_argument("weight count does not match group order");
  }
  return convflow::ProbabilityMeasure(
      group, Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size())));
}

void write_output(const std::string& out_path, const std::string& data) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file: " + out_path);
  out << data;
}

std::string run_evolve(const convflow::GroupSpec& group, const convflow::ProbabilityMeasure& mu0,
                       double t_value, int steps, const std::string& format) {
  if (steps < 0) throw std::invalid_argument("--steps must be >= 0");
  const convflow::FlowTime t(t_value);
  const convflow::ProbabilityMeasure attractor =
      convflow::haar_on(convflow::support_subgroup(mu0));

  std::vector<convflow::ProbabilityMeasure> orbit;
  orbit.reserve(static_cast<std::size_t>(steps) + 1);
  orbit.push_back(mu0);
  for (int n = 1; n <= steps; ++n) orbit.push_back(convflow::q_map(t, orbit.back()));

  if (format == "json") {
    json rows = json::array();
    for (int n = 0; n <= steps; ++n) {
      rows.push_back(json{{"step", n},
                          {"t_effective", convflow::delta_power(t, n).value()},
                          {"weights", convflow::measure_to_json(orbit[n])["weights"]},
                          {"tv_to_attractor", convflow::tv_distance(orbit[n], attractor)}});
    }
    json doc{{"group", convflow::group_to_json(group)},
             {"t", t_value},
             {"attractor", convflow::measure_to_json(attractor)},
             {"trajectory", std::move(rows)}};
    return doc.dump(2) + "\n";
  }
  if (format != "csv") throw std::invalid_argument("--format must be csv or json");

  std::ostringstream os;
  os << std::setprecision(17);
  os << "step,t_effective";
  for (int i = 0; i < group.order(); ++i) os << ",w_" << group.element_name(i);
  os << ",tv_to_attractor\n";
  for (int n = 0; n <= steps; ++n) {
    os << n << ',' << convflow::delta_power(t, n).value();
    for (int i = 0; i < group.order(); ++i) os << ',' << orbit[n].weights()[i];
    os << ',' << convflow::tv_distance(orbit[n], attractor) << '\n';
  }
  return os.str();
}

json jacobian_report_at(double t_value, const convflow::ProbabilityMeasure& mu) {
  const convflow::FlowTime t(t_value);
  return convflow::jacobian_to_json(t_value, mu, convflow::differential(t, mu),
                                    convflow::tangent_spectrum(t, mu));
}

std::string run_report(const std::string& kind, const convflow::GroupSpec& group,
                       const std::optional<convflow::ProbabilityMeasure>& mu,
                       const std::vector<double>& t_values, std::uint64_t seed, bool parallel) {
  const auto require_mu = [&]() -> const convflow::ProbabilityMeasure& {
    if (!mu) throw std::invalid_argument("--mu is required for report kind '" + kind + "'");
    return *mu;
  };
  const auto single_t = [&](double fallback) {
    if (t_values.size() > 1) throw std::invalid_argument("kind '" + kind + "' takes one --t");
    return t_values.empty() ? fallback : t_values.front();
  };

  json doc;
  if (kind == "limit") {
    const auto& m = require_mu();
    const convflow::FlowTime probe(single_t(convflow::kDefaultProbeT));
    doc = convflow::limit_report_to_json(m, convflow::predict_omega_limit(m, probe));
  } else if (kind == "jacobian") {
    const auto& m = require_mu();
    if (t_values.empty()) throw std::invalid_argument("jacobian requires at least one --t");
    json reports = json::array();
    if (parallel && t_values.size() > 1) {
      std::vector<std::future<json>> cells;
      cells.reserve(t_values.size());
      for (double tv : t_values) {
        cells.push_back(std::async(std::launch::async, jacobian_report_at, tv, m));
      }
      for (auto& c : cells) reports.push_back(c.get());
    } else {
      for (double tv : t_values) reports.push_back(jacobian_report_at(tv, m));
    }
    doc = t_values.size() == 1 ? std::move(reports[0])
                               : json{{"kind", "jacobian_grid"}, {"reports", std::move(reports)}};
  } else if (kind == "basic-sets") {
    doc = convflow::basic_sets_to_json(group, convflow::basic_sets(group, seed));
  } else if (kind == "fixed-points") {
    doc = convflow::fixed_points_to_json(group, convflow::fixed_points(group));
  } else if (kind == "cokernel") {
    doc = convflow::kernel_space_to_json(convflow::cokernel(require_mu()));
  } else if (kind == "acyclic") {
    const auto& m = require_mu();
    doc = convflow::acyclicity_to_json(convflow::is_acyclic(m));
    doc["reach"] = convflow::reach_to_json(group, convflow::reach_sets(m));
  } else if (kind == "witness") {
    const auto& m = require_mu();
    const convflow::FlowTime t(single_t(0.5));
    doc = convflow::witness_to_json(m, convflow::nonsurjectivity_witness(group, m, t));
  } else {
    throw std::invalid_argument("unknown report kind: " + kind);
  }
  return doc.dump(2) + "\n";
}

int run(int argc, char** argv) {
  CLI::App app{"convolution flow toolkit"};
  app.require_subcommand(1);

  std::string group_text;
  std::string mu_text;
  std::vector<double> t_values;
  int steps = 20;
  double tol = convflow::kAlgebraTol;
  std::string format = "csv";
  std::uint64_t seed = 1;
  std::string out_path;
  bool parallel = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--group", group_text, "cyclic factor orders, e.g. 2,2")->required();
    cmd->add_option("--mu", mu_text, "weights (comma list) or measure JSON path");
    cmd->add_option("--t", t_values, "flow time(s) in [0,1)");
    cmd->add_option("--tol", tol, "tolerance for report checks");
    cmd->add_option("--seed", seed, "RNG seed for sampled reports");
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  CLI::App* evolve = app.add_subcommand("evolve", "iterate the flow and write the orbit");
  add_common(evolve);
  evolve->add_option("--steps", steps, "number of iterations");
  evolve->add_option("--format", format, "csv or json");

  CLI::App* report = app.add_subcommand("report", "emit a JSON analysis document");
  std::string kind;
  report
      ->add_option("--kind", kind,
                   "limit | jacobian | basic-sets | fixed-points | cokernel | acyclic | witness")
      ->required();
  add_common(report);
  report->add_flag("--parallel", parallel, "evaluate independent grid cells concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? 2 : 0;
  }
  if (tol <= 0.0) throw std::invalid_argument("--tol must be positive");

  const convflow::GroupSpec group = parse_group(group_text);
  std::optional<convflow::ProbabilityMeasure> mu;
  if (!mu_text.empty()) mu = parse_measure(group, mu_text);

  std::string data;
  if (evolve->parsed()) {
    if (!mu) throw std::invalid_argument("evolve requires --mu");
    if (t_values.size() != 1) throw std::invalid_argument("evolve requires exactly one --t");
    data = run_evolve(group, *mu, t_values.front(), steps, format);
  } else {
    data = run_report(kind, group, mu, t_values, seed, parallel);
  }
  write_output(out_path, data);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const convflow::capacity_error& e) {
    std::cerr << "capacity error: " << e.what() << '\n';
    return 3;
  } catch (const convflow::numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 4;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
