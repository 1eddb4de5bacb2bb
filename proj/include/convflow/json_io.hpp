#pragma once

#include <json.hpp>

#include "convflow/flow.hpp"
#include "convflow/limits.hpp"
#include "convflow/measure.hpp"

namespace convflow {

// JSON wire formats. Groups: {"cyclic": [n1, n2, ...]}. Measures carry their
// group: {"group": {...}, "weights": [...]}. Elements appear as residue
// tuples. Doubles are emitted in round-trip-exact form, so a measure written
// and re-read is bit-identical.
using json = nlohmann::ordered_json;

json group_to_json(const GroupSpec& g);
GroupSpec group_from_json(const json& j);

json measure_to_json(const SignedMeasure& m);
SignedMeasure measure_from_json(const json& j);
ProbabilityMeasure probability_from_json(const json& j);

json subgroup_to_json(const Subgroup& h);

json reach_to_json(const GroupSpec& g, const ReachSequence& r);
json acyclicity_to_json(const AcyclicityReport& r);
json limit_report_to_json(const ProbabilityMeasure& mu, const LimitReport& r);
json kernel_space_to_json(const KernelSpace& k);
json basic_sets_to_json(const GroupSpec& g, const BasicSetDecomposition& d);
json fixed_points_to_json(const GroupSpec& g, const std::vector<ProbabilityMeasure>& pts);
json jacobian_to_json(double t, const ProbabilityMeasure& mu, const DifferentialOperator& d,
                      const std::vector<std::complex<double>>& spectrum);
json stable_report_to_json(const StableSetReport& r);
json witness_to_json(const ProbabilityMeasure& nu, const WitnessReport& r);

}  // namespace convflow
