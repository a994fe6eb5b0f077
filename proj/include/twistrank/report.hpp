#pragma once

#include <json.hpp>

#include <string>

#include "twistrank/heuristics.hpp"
#include "twistrank/lattice.hpp"
#include "twistrank/psi.hpp"
#include "twistrank/series.hpp"

namespace twistrank::report {

using json = nlohmann::ordered_json;

// Every report carries the curve and the resolved parameters, so artifacts
// are self-describing. All emitters have a matching parser; a serialized
// report re-parses to an equal in-memory value.

json to_json(const SumReport& rep);
SumReport sum_report_from_json(const json& j);
std::string sum_report_csv(const SumReport& rep);  // header + one row

json to_json(const Curve& curve, const DHistogram& hist);
DHistogram histogram_from_json(const json& j);

json to_json(const Curve& curve, const RootSet& roots);
RootSet root_set_from_json(const json& j);

json to_json(const Curve& curve, const ReducedLattice& rl, double j_exp, double k_exp);
json to_json(const Curve& curve, const TwistTriple& triple, long long u, long long v,
             long long t);

json to_json(const ExperimentReport& rep);
ExperimentReport experiment_from_json(const json& j);

json to_json(const HeuristicBoundReport& rep);
HeuristicBoundReport heuristic_report_from_json(const json& j);

json to_json(const RatioHistogram& hist);

// stats rows: one observed count vs. the model's replicate mean/std
struct StatsRow {
  long long B = 0;
  double C = 0.0;
  std::uint64_t observed = 0;
  double model_mean = 0.0;
  double model_std = 0.0;
  double log4_reference = 0.0;

  bool operator==(const StatsRow&) const = default;
};
json stats_to_json(const Curve& curve, const std::vector<StatsRow>& rows, std::uint64_t seed,
                   unsigned replicates, const AnnulusModel& model);
std::string stats_csv(const std::vector<StatsRow>& rows);

}  // namespace twistrank::report
