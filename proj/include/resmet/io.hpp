#pragma once

#include <json.hpp>

#include <string>

#include "resmet/ers.hpp"
#include "resmet/limit.hpp"
#include "resmet/reduction.hpp"
#include "resmet/walk.hpp"

namespace resmet {

using json = nlohmann::json;

// Scalar literals in files: a JSON number, a decimal string, or "p/q".
// JSON integers and string literals parse exactly in the rational backend;
// JSON floating numbers are recovered through their shortest decimal form.
Scalar scalar_from_json(const json& j, Backend b);
json scalar_to_json(const Scalar& s);

// {"labels": [...], "d": [[...]]}; unknown keys are ignored.
MetricSpace metric_from_json(const json& j, Backend b, const TolerancePolicy& pol = {});
json metric_to_json(const MetricSpace& m);

// {"labels": [...], "edges": [{"u","v","w"}]}
WeightedGraph graph_from_json(const json& j, Backend b);
json graph_to_json(const WeightedGraph& g);

MetricSpace read_metric_file(const std::string& path, Backend b,
                             const TolerancePolicy& pol = {});
WeightedGraph read_graph_file(const std::string& path, Backend b);

json verdict_to_json(const ErsVerdict& v);
json reduction_trace_to_json(const ReductionTrace& t);
json limit_report_to_json(const LimitGraphReport& r);
json mc_estimate_to_json(const McEstimate& e);
json hit_split_to_json(const HitReturnSplit& s);
json phi_law_to_json(const PhiLawReport& r);
json limit_walk_to_json(const LimitWalkReport& r);

// CSV trajectory export: edge,n,value rows (then vertex strengths).
std::string limit_report_to_csv(const LimitGraphReport& r);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace resmet
